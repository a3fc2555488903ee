"""
Analytic Outage Module
======================
CDF engines for the perfect-alignment channel H and the one-bit channel
|G|^2, the two integral lemmas they rest on, and outage-curve sweeps.
"""

"""
Special Functions Module
========================
Log-gamma, incomplete gamma, modified Bessel K0/K1 and binomial weights
used by every analytic outage formula.
"""

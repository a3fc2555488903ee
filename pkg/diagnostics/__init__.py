"""
Diagnostics Module
==================
Relative-entropy checks of the gamma surrogate and the mutual information
between the in-phase and quadrature components under one-bit alignment.
"""

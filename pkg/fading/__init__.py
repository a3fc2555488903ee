"""
Fading Distributions Module
===========================
Per-path and aggregate laws: double Rayleigh, the gamma surrogate, the
in-phase / quadrature components under one-bit phase errors, Rayleigh.
"""

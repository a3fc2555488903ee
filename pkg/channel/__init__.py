"""
Channel Model Module
====================
Link geometry, UMi NLOS path loss, the normalised direct-link scale
sigma_d and the SNR-to-gain-threshold conventions.
"""

"""
Monte-Carlo Module
==================
Reference sampling of the IRS channel and outage-frequency estimation on
reproducible counter-based random streams.
"""

"""
Asymptotics Module
==================
Leading-order (small argument, high SNR) CDFs and diversity orders.
"""

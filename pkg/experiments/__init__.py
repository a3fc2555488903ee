"""
Experiments Module
==================
Command-line surface of irslab: experiment configuration, sweep execution,
CSV and SVG output, stored runs and golden-run regression.
"""

"""
Core Module
===========
Shared plumbing for every irslab app: the abstract base model, the
exception hierarchy and the quadrature/probability helpers.
"""

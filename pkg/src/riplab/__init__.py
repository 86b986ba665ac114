"""Weighted least squares, weighted l1 recovery and RIP estimation with optimal sampling."""
__version__ = "0.1.0"

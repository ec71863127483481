"""Learning discrete angular measures of heavy-tailed data by spectral clustering of extremes."""
__version__ = "0.1.0"

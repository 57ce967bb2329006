"""Young functions, Campanato gauges and numerical embedding checks."""

__version__ = "0.1.0"

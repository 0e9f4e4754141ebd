"""Sharp constants for fractional Hardy operators on product spaces."""

__version__ = "0.1.0"

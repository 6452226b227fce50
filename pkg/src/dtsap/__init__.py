"""Dynamic time-slot assignment with commitments and customer preferences."""
__version__ = "0.1.0"

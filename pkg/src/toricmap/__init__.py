"""Multi-valued rational maps between toric varieties in Cox coordinates."""

__version__ = "0.1.0"

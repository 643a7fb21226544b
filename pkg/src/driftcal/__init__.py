"""Fast-feedback gate-calibration protocols and their simulation harness."""

__version__ = "0.1.0"

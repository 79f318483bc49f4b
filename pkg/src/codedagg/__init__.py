"""Byzantine-robust secure aggregation with ramp sharing and vector commitments."""

__version__ = "0.1.0"

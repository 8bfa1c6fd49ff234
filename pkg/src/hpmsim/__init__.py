"""High-power-microwave counter-UAS simulation engine."""

__version__ = "0.1.0"

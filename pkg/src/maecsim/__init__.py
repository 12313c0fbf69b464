"""Event-driven sensor network simulator with hotspot-seeking mobile base stations."""

__version__ = "0.1.0"

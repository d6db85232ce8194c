"""Budget allocation for two-layer sensor defenses."""

__version__ = "0.1.0"

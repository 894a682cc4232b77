"""Multiple-play bandits with shareable finite-capacity arms."""

__version__ = "0.1.0"

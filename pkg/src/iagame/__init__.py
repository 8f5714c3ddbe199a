"""Information-acquisition games over noisy tests of Boolean variables."""

__version__ = "0.1.0"

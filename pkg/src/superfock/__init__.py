"""Supersymmetric flows on truncated Bose-Fermi Fock spaces."""

from .fock import ConfigError, ModeConfig

__all__ = ["ConfigError", "ModeConfig"]
__version__ = "0.1.0"

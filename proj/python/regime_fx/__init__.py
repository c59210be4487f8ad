"""Regime-switching jump-diffusion FX option pricing."""

from ._regime_fx import *  # noqa: F401,F403
from ._regime_fx import __doc__  # noqa: F401

__version__ = "0.1.0"

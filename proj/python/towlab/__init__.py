"""Tug-of-war-with-noise DPP solvers, game simulation, and mean-value diagnostics."""

from ._towlab import *  # noqa: F401,F403
from ._towlab import __doc__  # noqa: F401

__version__ = "0.1.0"

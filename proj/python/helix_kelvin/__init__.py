"""Helical Kelvin waves: Bessel kernels, dispersion relations and contour continuation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

SCHEMA = "helix-kelvin/v1"

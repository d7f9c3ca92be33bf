"""Percolation-based object detection in binary images."""

from ._perco import *  # noqa: F401,F403
from ._perco import __version__  # noqa: F401

"""Dual-band blockage-prediction link simulator."""

from dualband._core import *  # noqa: F401,F403
from dualband import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]

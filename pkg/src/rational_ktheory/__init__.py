"""K-theory invariants of the C*-algebras of a rational map, its Fatou set
and its Julia set, computed from critical-orbit data and integer linear
algebra."""
from __future__ import annotations

__version__ = "0.1.0"

from .config import Budget, Config, Tolerances
from .cycle_analysis import *  # noqa: F401,F403
from .exceptions import *  # noqa: F401,F403
from .graph_algebra import *  # noqa: F401,F403
from .integer_linalg import *  # noqa: F401,F403
from .invariants import *  # noqa: F401,F403
from .k_theory import *  # noqa: F401,F403
from .quadratic import *  # noqa: F401,F403
from .rational_map import *  # noqa: F401,F403
from .render import Rect, render
from .shift_model import *  # noqa: F401,F403

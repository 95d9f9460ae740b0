"""Determinantal processes on C4-free bi-regular incidence structures.

Exact projection-DPP sampling over the row space of a signed incidence
matrix, the limit ball law of the associated branching process, and the
convergence experiments connecting the two.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

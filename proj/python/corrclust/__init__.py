"""Correlation clustering on semi-random instances.

Thin re-export of the _corrclust extension module: instance generators, the
low-rank SDP solver, the prune + local-search pipeline, geometric recovery,
metrics, and the betting-game simulator.
"""

from ._corrclust import *  # noqa: F401,F403
from ._corrclust import __version__  # noqa: F401

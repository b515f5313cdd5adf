"""Truncated-Fock-space simulation of bosonic grid-state generation and
quantum-error-correction benchmarks. Thin wrapper over the C++ core."""

from _gridforge import *  # noqa: F401,F403
from _gridforge import __version__  # noqa: F401

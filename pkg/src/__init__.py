"""
FC Affine Enumerator

Length generating functions of fully commutative elements of the affine
symmetric groups, with brute-force oracles to check them against.
"""

__version__ = "0.1.0"

from .core import (
    AffinePermutation,
    Abacus,
    QPoly,
    assemble_f,
    bfs_enumerate,
)

__all__ = [
    "AffinePermutation",
    "Abacus",
    "QPoly",
    "assemble_f",
    "bfs_enumerate",
]

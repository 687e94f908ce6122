"""Core enumeration: series arithmetic, affine permutations, abaci, formulas and oracles."""

from .abacus import Abacus, AbacusClass, LMRProfile
from .affine import AffinePermutation, FinitePermutation, Side
from .errors import EnumerationError, PreconditionError
from .formulas import assemble_f, finite_fc_gf, long_gf, middle_descent_series
from .golden import GoldenTable, load_golden_table
from .oracle import LengthHistogram, bfs_enumerate, fc_by_definition, finite_321_stats
from .qseries import MultiSeries, QPoly, SeriesCaps, q_binomial

__all__ = [
    "Abacus",
    "AbacusClass",
    "LMRProfile",
    "AffinePermutation",
    "FinitePermutation",
    "Side",
    "EnumerationError",
    "PreconditionError",
    "assemble_f",
    "finite_fc_gf",
    "long_gf",
    "middle_descent_series",
    "GoldenTable",
    "load_golden_table",
    "LengthHistogram",
    "bfs_enumerate",
    "fc_by_definition",
    "finite_321_stats",
    "MultiSeries",
    "QPoly",
    "SeriesCaps",
    "q_binomial",
]

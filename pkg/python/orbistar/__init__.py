"""
orbistar: exact stringy and orbifold products of global quotients.

Load a corpus document with :func:`load`, inspect it with
:func:`product_table` and :func:`ages`, and run the identity checks with
:func:`run_suite`.
"""

__version__ = "0.1.0"

from .errors import (
    AlgebraError,
    ComparisonError,
    CorpusError,
    GroupError,
    MissingDataError,
    NotHonestError,
    OrbistarError,
)
from .grouptheory import FiniteGroup
from .gradedalgebra import AlgebraElement, FiniteAlgebra, LinearMap, MapKind
from .kclass import KClass, c_top, ch, euler_k, todd
from .orbdata import OrbifoldDatum, double_sectors, load, sector, triple_sectors, validate
from .stringy import (
    StringyElement,
    Theory,
    age,
    ages,
    g_act,
    im_class,
    invariant_projector,
    obstruction,
    product_table,
    stringy_chern,
    stringy_mul,
)
from .verify import run_suite
from .hkr import check_iso, compare, compare_graded_dims, solve_scalings

__all__ = [
    "__version__",
    "AlgebraElement",
    "AlgebraError",
    "ComparisonError",
    "CorpusError",
    "FiniteAlgebra",
    "FiniteGroup",
    "GroupError",
    "KClass",
    "LinearMap",
    "MapKind",
    "MissingDataError",
    "NotHonestError",
    "OrbifoldDatum",
    "OrbistarError",
    "StringyElement",
    "Theory",
    "age",
    "ages",
    "c_top",
    "ch",
    "check_iso",
    "compare",
    "compare_graded_dims",
    "double_sectors",
    "euler_k",
    "g_act",
    "im_class",
    "invariant_projector",
    "load",
    "obstruction",
    "product_table",
    "run_suite",
    "sector",
    "solve_scalings",
    "stringy_chern",
    "stringy_mul",
    "todd",
    "triple_sectors",
    "validate",
]

"""Exact rank censuses, counting formulas, and exponential sums for
stacked persymmetric matrix families over GF(2)."""

from .census import (
    BudgetError,
    JointRankTable,
    RankDistribution,
    diagonal_sigma,
    invertible_fraction,
    joint_rank_census,
    rank_census,
)
from .families import (
    Double,
    FamilyShape,
    PersymPlusRows,
    Single,
    Triple,
    format_shape,
    parse_shape,
)
from .formulas import (
    FormulaResult,
    ReductionCheck,
    gamma_double,
    gamma_double_recur,
    gamma_persym,
    gamma_persym_rows,
    gamma_triple,
    gamma_triple_recur,
    joint_persym_formula,
    moment,
    r_q_single_closed,
    reduction_identities,
)
from .gf2core import BitMatrix, bilinear, from_lists, leading_rows, rank, vstack
from .laurent import (
    LaurentPoint,
    SumShape,
    exp_sum_direct,
    exp_sum_rank,
    integral_moment,
    point_from_bits,
)
from .polycount import count_solutions

__all__ = [
    "BitMatrix",
    "BudgetError",
    "Double",
    "FamilyShape",
    "FormulaResult",
    "JointRankTable",
    "LaurentPoint",
    "PersymPlusRows",
    "RankDistribution",
    "ReductionCheck",
    "Single",
    "SumShape",
    "Triple",
    "bilinear",
    "count_solutions",
    "diagonal_sigma",
    "exp_sum_direct",
    "exp_sum_rank",
    "format_shape",
    "from_lists",
    "gamma_double",
    "gamma_double_recur",
    "gamma_persym",
    "gamma_persym_rows",
    "gamma_triple",
    "gamma_triple_recur",
    "integral_moment",
    "invertible_fraction",
    "joint_persym_formula",
    "joint_rank_census",
    "leading_rows",
    "moment",
    "parse_shape",
    "point_from_bits",
    "r_q_single_closed",
    "rank",
    "rank_census",
    "reduction_identities",
    "vstack",
]

__version__ = "0.1.0"

"""Classification of commutative 3-nilpotent Z_p-algebras with cyclic M.M.

Jordan splitting of p-adic symmetric forms, the braces attached to a
defining matrix, isomorphism in the torsion-free case and isoclinism in the
torsion case.
"""
from .errors import (
    BudgetExceeded,
    InsufficientPrecision,
    NonUnit,
    NoNondegenerateLift,
    NotASquare,
    NotSymmetric,
    NotUnimodular,
    PrecisionTooSmall,
    RankDeficient,
    UnitKernel,
    ZpBraceError,
)
from .padic import PAdicCtx, PAdicInt, SquareClass
from .latform import GramMatrix, JordanBlock, JordanInvariant, CongruenceWitness
from .brace import BraceAlgebra, Torsion, TorsionFree, from_theta
from .isoclinism import TorsionForm, Covering, IsoclinismInvariant, StemAlgebra

__all__ = [
    "BraceAlgebra", "BudgetExceeded", "CongruenceWitness", "Covering", "GramMatrix",
    "InsufficientPrecision", "IsoclinismInvariant", "JordanBlock", "JordanInvariant",
    "NoNondegenerateLift", "NonUnit", "NotASquare", "NotSymmetric", "NotUnimodular",
    "PAdicCtx", "PAdicInt", "PrecisionTooSmall", "RankDeficient", "SquareClass",
    "StemAlgebra", "Torsion", "TorsionForm", "TorsionFree", "UnitKernel", "ZpBraceError",
    "from_theta",
]

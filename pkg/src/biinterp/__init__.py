"""Finite-ring verifier for the bi-interpretation of SL2 and SL3 with their coefficient rings."""

from biinterp.groups import GroupElem, MatrixGroup, QuotientKind
from biinterp.ring import ProductRing, RingElem, build_S, decompose_square_diff

__all__ = [
    "GroupElem", "MatrixGroup", "ProductRing", "QuotientKind", "RingElem",
    "build_S", "decompose_square_diff",
]

"""SL2 over a product ring with the named unipotent, torus and Weyl elements."""

from __future__ import annotations

from functools import cached_property

from biinterp.errors import NonUnitError
from biinterp.groups import GroupElem, Mat2, MatrixGroup, QuotientKind
from biinterp.ring import ProductRing, RingElem, inv


class GroupCtx(MatrixGroup):
    """SL2(R)/Z together with the parameters tau, u, v, h(tau) and w.

    ``tau`` is 2 at odd-characteristic components and 3 at 2-adic ones.
    """

    def __init__(self, ring: ProductRing, quotient: QuotientKind = QuotientKind.TRIVIAL):
        super().__init__(ring, 2, quotient)
        self.tau = ring([3 if c.prime == 2 else 2 for c in ring.components])
        self.u = self.make_u(1)
        self.v = self.make_v(1)
        self.w = self.u * self.v * self.u
        self.h_tau = self.make_h(self.tau)

    def make_u(self, lam) -> GroupElem:
        lam = self.ring(lam)
        return self.element((1, lam.code, 0, 1))

    def make_v(self, lam) -> GroupElem:
        """Lower unipotent with lower-left entry ``-lam``."""
        lam = self.ring(lam)
        return self.element((1, 0, (-lam).code, 1))

    def make_h(self, lam) -> GroupElem:
        """``diag(lam^-1, lam)``; raises :class:`NonUnitError` for non-units."""
        lam = self.ring(lam)
        li = inv(lam)
        return self.element((li.code, 0, 0, lam.code))

    @cached_property
    def u_table(self) -> dict[GroupElem, RingElem]:
        """Inverse of ``lam -> u(lam)``; injective in every quotient."""
        return {self.make_u(r): r for r in self.ring.elements()}

    def decode_u(self, g: GroupElem) -> RingElem | None:
        return self.u_table.get(g)

    @cached_property
    def central_elements(self) -> list[GroupElem]:
        """The scalar matrices z with z^2 = 1, before taking the quotient."""
        plain = MatrixGroup(self.ring, 2)
        return [plain.element((z, 0, 0, z)) for z in range(self.ring.order)
                if z * z % self.n == 1 % self.n]


def quotient_equiv(A: Mat2, B: Mat2, q: QuotientKind) -> bool:
    """True iff ``B = A*Z`` for a scalar ``Z`` of the central subgroup ``q``."""
    ring = A.a.ring
    if q is QuotientKind.TRIVIAL:
        scalars = [ring.one]
    elif q is QuotientKind.PLUS_MINUS_ONE:
        scalars = [ring.one, -ring.one]
    else:
        scalars = [z for z in ring.elements() if z * z == 1]
    return any(A.entries == B.scale(z).entries for z in scalars)


def h_identity_rhs(ctx: GroupCtx, xi: RingElem) -> GroupElem:
    """``v(xi) u(xi^-1) v(xi) w^-1``, which equals ``h(xi)``."""
    return ctx.product([ctx.make_v(xi), ctx.make_u(inv(xi)), ctx.make_v(xi), ctx.w.inv()])


__all__ = [
    "GroupCtx",
    "GroupElem",
    "Mat2",
    "NonUnitError",
    "QuotientKind",
    "h_identity_rhs",
    "quotient_equiv",
]

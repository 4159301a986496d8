"""Interpreting the ring in SL2(R)/Z and SL2(R)/Z back in the ring.

Everything here is computed from the group side: the torus H is cut out as a
centralizer, U as the image of a parameterised existential formula, the ring
multiplication on U by the square-difference witnesses, and the coordinate
map theta by twisting into the big cell and factorising there.  The oracles
(``u``-bijection, matrix entries) are used only to check results.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from biinterp import fo
from biinterp.errors import CheckFailure, DomainError, UnsupportedRingError
from biinterp.groups import GroupElem, Mat2, QuotientKind
from biinterp.ring import RingElem, SSet, build_S, decompose_square_diff, inv
from biinterp.sl2 import GroupCtx, quotient_equiv

H_FORMULA = "g * $h = $h * g"
U_FORMULA = "exists x:H, y:H, s:US . g = $u ^ x * $u ^-1 ^ y * s"
V_FORMULA = "exists y:U . g = y ^ $w"
W_FORMULA = "exists y:U01, z:U01 . g = y * z ^ $w * y and g * g * g * g = 1"


@dataclass
class DefinabilityReport:
    name: str
    computed_set_size: int
    oracle_set_size: int
    equal: bool
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0
    checked: int = 0
    note: str = ""

    def __post_init__(self):
        self.counterexamples = list(self.counterexamples)[:10]


def compare_sets(name: str, computed, oracle, started: float, note: str = "") -> DefinabilityReport:
    computed, oracle = set(computed), set(oracle)
    diff = sorted(computed ^ oracle, key=_elem_key)
    return DefinabilityReport(
        name,
        len(computed),
        len(oracle),
        not diff,
        diff[:10],
        time.perf_counter() - started,
        checked=len(computed | oracle),
        note=note,
    )


def _elem_key(g):
    return g.sort_key() if hasattr(g, "sort_key") else g


def p_formula_text(n_offsets: int) -> str:
    """The ternary multiplication formula, one disjunct per offset pair.

    Parameters ``$s<i>`` stand for ``u(S_i)`` and ``$p<i>_<j>`` for
    ``u(S_i * S_j)``.
    """
    clauses = []
    for i in range(n_offsets):
        for j in range(n_offsets):
            clauses.append(
                f"(y1 = $u ^ z * $u ^-1 ^ r * $s{j} and y2 = $u ^ x * $u ^-1 ^ y * $s{i}"
                f" and y3 = y1 ^ x * y1 ^-1 ^ y * $s{i} ^ z * $s{i} ^-1 ^ r * $p{i}_{j})"
            )
    return "exists x:H, y:H, z:H, r:H . " + " or ".join(clauses)


@dataclass(frozen=True)
class MatU:
    """2x2 matrix whose entries are elements of the interpreted ring U."""

    a: GroupElem
    b: GroupElem
    c: GroupElem
    d: GroupElem

    @property
    def entries(self) -> tuple[GroupElem, ...]:
        return (self.a, self.b, self.c, self.d)


class InterpretedRing:
    """(U, *, star) with zero u(0) and one u(1)."""

    def __init__(self, carrier: Sequence[GroupElem], add: Callable, mul: Callable, zero: GroupElem, one: GroupElem):
        self.carrier = list(carrier)
        self._add = add
        self._mul = mul
        self.zero = zero
        self.one = one
        self._add_cache: dict = {}
        self._mul_cache: dict = {}

    def add(self, x: GroupElem, y: GroupElem) -> GroupElem:
        key = (x, y)
        r = self._add_cache.get(key)
        if r is None:
            r = self._add_cache[key] = self._add(x, y)
        return r

    def mul(self, x: GroupElem, y: GroupElem) -> GroupElem:
        key = (x, y)
        r = self._mul_cache.get(key)
        if r is None:
            r = self._mul_cache[key] = self._mul(x, y)
        return r

    def neg(self, x: GroupElem) -> GroupElem:
        return x.inv()

    def matmul(self, A: MatU, B: MatU) -> MatU:
        add, mul = self.add, self.mul
        return MatU(
            add(mul(A.a, B.a), mul(A.b, B.c)),
            add(mul(A.a, B.b), mul(A.b, B.d)),
            add(mul(A.c, B.a), mul(A.d, B.c)),
            add(mul(A.c, B.b), mul(A.d, B.d)),
        )

    def det(self, A: MatU) -> GroupElem:
        return self.add(self.mul(A.a, A.d), self.neg(self.mul(A.b, A.c)))

    def inverse(self, A: MatU) -> MatU:
        """Adjugate inverse; the determinant must decode to 1."""
        if self.det(A) != self.one:
            raise CheckFailure(f"interpreted determinant of {A} is not one")
        return MatU(A.d, self.neg(A.b), self.neg(A.c), A.a)

    def axiom_violations(self, limit: int | None = None) -> list[tuple]:
        """Triples breaking associativity, commutativity or distributivity."""
        bad = []
        xs = self.carrier if limit is None else self.carrier[:limit]
        add, mul = self.add, self.mul
        for x in xs:
            if add(x, self.zero) != x or mul(x, self.one) != x:
                bad.append((x,))
            for y in xs:
                if add(x, y) != add(y, x) or mul(x, y) != mul(y, x):
                    bad.append((x, y))
                for z in xs:
                    if (
                        add(add(x, y), z) != add(x, add(y, z))
                        or mul(mul(x, y), z) != mul(x, mul(y, z))
                        or mul(x, add(y, z)) != add(mul(x, y), mul(x, z))
                    ):
                        bad.append((x, y, z))
                if len(bad) >= 10:
                    return bad
        return bad


class SL2Interpretation:
    """The definable copy of the ring inside ``ctx`` and the coordinate map.

    Sets are computed lazily and frozen on first use.
    """

    def __init__(self, ctx: GroupCtx, S: SSet | None = None):
        self.ctx = ctx
        self.ring = ctx.ring
        self.S = S if S is not None else build_S(self.ring)
        self.S_list = list(self.S)

    # --- parameters ----------------------------------------------------------

    @cached_property
    def params(self) -> dict[str, GroupElem]:
        ctx = self.ctx
        p = {"h": ctx.h_tau, "u": ctx.u, "v": ctx.v, "w": ctx.w}
        for i, s in enumerate(self.S_list):
            p[f"s{i}"] = ctx.make_u(s)
            for j, t in enumerate(self.S_list):
                p[f"p{i}_{j}"] = ctx.make_u(s * t)
        return p

    @cached_property
    def u_of_S(self) -> list[GroupElem]:
        return [self.ctx.make_u(s) for s in self.S_list]

    def sorts(self, **extra) -> dict[str, list]:
        s = {"H": self.H_list, "US": self.u_of_S}
        s.update(extra)
        return s

    # --- definable sets --------------------------------------------------------

    def compute_H(self) -> set[GroupElem]:
        """The centralizer of h(tau), as the set defined by a commutation formula."""
        return set(self.H_list)

    @cached_property
    def H_list(self) -> list[GroupElem]:
        f = fo.parse(H_FORMULA)
        hs = fo.define_set(f, "g", self.ctx.enumerate(), {}, {"h": self.ctx.h_tau}, strategy="filter")
        return sorted(hs, key=GroupElem.sort_key)

    def compute_U(self) -> set[GroupElem]:
        return set(self.U_list)

    @cached_property
    def U_list(self) -> list[GroupElem]:
        f = fo.parse(U_FORMULA)
        us = fo.define_set(f, "g", None, self.sorts(), self.params, strategy="image")
        return sorted(us, key=GroupElem.sort_key)

    @cached_property
    def U_set(self) -> frozenset[GroupElem]:
        return frozenset(self.U_list)

    def compute_V(self) -> set[GroupElem]:
        return set(self.V_list)

    @cached_property
    def V_list(self) -> list[GroupElem]:
        f = fo.parse(V_FORMULA)
        vs = fo.define_set(f, "g", None, {"U": self.U_list}, self.params, strategy="image")
        return sorted(vs, key=GroupElem.sort_key)

    @cached_property
    def V_set(self) -> frozenset[GroupElem]:
        return frozenset(self.V_list)

    @cached_property
    def H_set(self) -> frozenset[GroupElem]:
        return frozenset(self.H_list)

    @cached_property
    def U01_list(self) -> list[GroupElem]:
        """u(R_{0,1}): the y in U with y * (y - 1) = 0 in the interpreted ring."""
        zero = self.ctx.identity
        uinv = self.ctx.u.inv()
        return [y for y in self.U_list if self.star_mul(y, y * uinv) == zero]

    def compute_W(self) -> set[GroupElem]:
        return set(self.W_list)

    @cached_property
    def W_list(self) -> list[GroupElem]:
        f = fo.parse(W_FORMULA)
        ws = fo.define_set(f, "g", None, {"U01": self.U01_list}, self.params, strategy="image")
        return sorted(ws, key=GroupElem.sort_key)

    @cached_property
    def W_set(self) -> frozenset[GroupElem]:
        return frozenset(self.W_list)

    # --- oracles -------------------------------------------------------------------

    def oracle_H(self) -> set[GroupElem]:
        return {self.ctx.make_h(x) for x in self.ring.elements() if x.is_unit()}

    def oracle_U(self) -> set[GroupElem]:
        return {self.ctx.make_u(r) for r in self.ring.elements()}

    def oracle_V(self) -> set[GroupElem]:
        return {self.ctx.make_v(r) for r in self.ring.elements()}

    def w_pattern(self, pattern: Sequence[bool]) -> GroupElem:
        """Componentwise 1 (False) or w (True)."""
        ring = self.ring
        a = ring([0 if p else 1 for p in pattern])
        b = ring([1 if p else 0 for p in pattern])
        return self.ctx.element((a, b, -b, a))

    def oracle_W(self) -> set[GroupElem]:
        k = len(self.ring.components)
        return {self.w_pattern(p) for p in itertools.product((False, True), repeat=k)}

    # --- the interpreted ring --------------------------------------------------------

    def decode(self, y: GroupElem) -> RingElem:
        """Ring element λ with u(λ) = y (the u-bijection)."""
        r = self.ctx.decode_u(y)
        if r is None or y not in self.U_set:
            raise DomainError(f"{y!r} is not in U")
        return r

    def _star(self, y1: GroupElem, y2: GroupElem) -> GroupElem:
        ctx = self.ctx
        beta, alpha = self.decode(y1), self.decode(y2)
        wa = decompose_square_diff(alpha, self.S)
        wb = decompose_square_diff(beta, self.S)
        x, y = ctx.make_h(wa.xi), ctx.make_h(wa.eta)
        z, r = ctx.make_h(wb.xi), ctx.make_h(wb.eta)
        us = ctx.make_u(wa.s)
        y1i, usi = y1.inv(), us.inv()
        result = ctx.product([y1 ^ x, y1i ^ y, us ^ z, usi ^ r, ctx.make_u(wa.s * wb.s)])
        if result != ctx.make_u(beta * alpha):
            raise CheckFailure(f"star witness product for {y1!r} * {y2!r} is {result!r}")
        return result

    @cached_property
    def _star_cache(self) -> dict:
        return {}

    def star_mul(self, y1: GroupElem, y2: GroupElem) -> GroupElem:
        """u(β) * u(α) = u(βα), evaluated through the square-difference witnesses."""
        key = (y1, y2)
        r = self._star_cache.get(key)
        if r is None:
            r = self._star_cache[key] = self._star(y1, y2)
        return r

    @cached_property
    def interpreted_ring(self) -> InterpretedRing:
        ctx = self.ctx
        return InterpretedRing(self.U_list, ctx.mul, self.star_mul, ctx.identity, ctx.u)

    # --- the multiplication formula ------------------------------------------------------

    def verify_P_formula(self) -> DefinabilityReport:
        """Forward image of the multiplication formula vs the multiplication graph."""
        started = time.perf_counter()
        ctx = self.ctx
        elems = list(self.U_list)
        index = {g: i for i, g in enumerate(elems)}

        def idx(g):
            i = index.get(g)
            if i is None:
                raise _NotClosed(g)
            return i

        H = self.H_list
        try:
            for g in list(self.params.values()):
                if g in (ctx.h_tau, ctx.v, ctx.w):
                    continue
                idx(g)
            m = len(elems)
            mul = np.empty((m, m), dtype=np.int32)
            for i, a in enumerate(elems):
                for j, b in enumerate(elems):
                    mul[i, j] = idx(a * b)
            inv_ = np.array([idx(a.inv()) for a in elems], dtype=np.int32)
            conj = np.array([[idx(a ^ h) for h in H] for a in elems], dtype=np.int32)
        except _NotClosed as exc:
            rep = DefinabilityReport("mult-formula", 0, len(elems) ** 2, False, [exc.elem],
                                     time.perf_counter() - started, note="U is not closed under the group operations")
            return rep
        nS = len(self.S_list)
        iu = index[ctx.u]
        s_idx = np.array([index[g] for g in self.u_of_S], dtype=np.int32)
        p_idx = np.array([[index[self.params[f"p{i}_{j}"]] for j in range(nS)] for i in range(nS)], dtype=np.int32)
        nH = len(H)
        hx = np.arange(nH)
        # axes: x, y, z, r, s, t
        def ax(arr, axis):
            shape = [1] * 6
            shape[axis] = len(arr)
            return np.asarray(arr).reshape(shape)

        ux = ax(conj[iu], 0)
        uy = ax(conj[inv_[iu]], 1)
        uz = ax(conj[iu], 2)
        ur = ax(conj[inv_[iu]], 3)
        s_s = ax(s_idx, 4)
        s_t = ax(s_idx, 5)
        y1 = mul[mul[uz, ur], s_t]                      # (1,1,z,r,1,t)
        y2 = mul[mul[ux, uy], s_s]                      # (x,y,1,1,s,1)
        X = hx.reshape(-1, 1, 1, 1, 1, 1)
        Y = hx.reshape(1, -1, 1, 1, 1, 1)
        Z = hx.reshape(1, 1, -1, 1, 1, 1)
        Rr = hx.reshape(1, 1, 1, -1, 1, 1)
        t1 = conj[y1, X]
        t2 = conj[inv_[y1], Y]
        t3 = conj[s_s, Z]
        t4 = conj[inv_[s_s], Rr]
        pst = p_idx.reshape(1, 1, 1, 1, nS, nS)
        y3 = mul[mul[mul[mul[t1, t2], t3], t4], pst]
        y1b, y2b, y3b = np.broadcast_arrays(y1, y2, y3)
        codes = (y1b.astype(np.int64) * m + y2b) * m + y3b
        relation = np.unique(codes)
        graph = []
        for a in self.U_list:
            for b in self.U_list:
                alpha, beta = self.decode(b), self.decode(a)
                graph.append((index[a] * m + index[b]) * m + index[ctx.make_u(beta * alpha)])
        graph = np.unique(np.array(graph, dtype=np.int64))
        extra = np.setdiff1d(relation, graph)
        missing = np.setdiff1d(graph, relation)

        def triple(code):
            code = int(code)
            return (elems[code // (m * m)], elems[code // m % m], elems[code % m])

        counter = [triple(c) for c in list(extra[:5]) + list(missing[:5])]
        return DefinabilityReport(
            "mult-formula",
            len(relation),
            len(graph),
            len(extra) == 0 and len(missing) == 0,
            counter,
            time.perf_counter() - started,
            checked=int(codes.size),
            note=f"{len(extra)} unsound, {len(missing)} missing triples",
        )

    def p_formula(self) -> fo.Formula:
        return fo.parse(p_formula_text(len(self.S_list)))

    def p_holds(self, y1: GroupElem, y2: GroupElem, y3: GroupElem) -> bool:
        """Evaluate the multiplication formula itself through the logic engine."""
        return fo.eval_formula(self.p_formula(), {"H": self.H_list}, self.params, {"y1": y1, "y2": y2, "y3": y3})

    # --- the big cell ------------------------------------------------------------------

    def gamma1_member(self, g: GroupElem) -> bool:
        return g.codes[0] in self._unit_codes

    @cached_property
    def _unit_codes(self) -> frozenset[int]:
        return frozenset(self.ring.unit_codes)

    def vhu_decompose(self, g: GroupElem) -> tuple[GroupElem, GroupElem, GroupElem]:
        """``(v(-c/a), h(1/a), u(b/a))`` for ``g = (a, b; c, d)`` with ``a`` a unit."""
        if not self.gamma1_member(g):
            raise DomainError(f"{g!r} is not in Gamma_1")
        ctx = self.ctx
        a, b, c, _ = g.entries
        ai = inv(a)
        parts = (ctx.make_v(-ai * c), ctx.make_h(ai), ctx.make_u(ai * b))
        if ctx.product(parts) != g:
            raise CheckFailure(f"VHU factors of {g!r} do not multiply back")
        return parts

    @cached_property
    def _HU(self) -> frozenset[GroupElem]:
        return frozenset(h * u for h in self.H_list for u in self.U_list)

    @cached_property
    def _HV(self) -> frozenset[GroupElem]:
        return frozenset(h * v for h in self.H_list for v in self.V_list)

    def vhu_definable(self, g: GroupElem) -> tuple[list, list, list]:
        """The three factors as the solution sets of their defining conditions.

        ``x in V ∩ gUH``, ``y in U ∩ HVg`` and ``z in H ∩ VgU``; each list
        has exactly one element when ``g`` is in the big cell.
        """
        gi = g.inv()
        xs = [x for x in self.V_list if (gi * x) in self._HU]
        ys = [y for y in self.U_list if (y * gi) in self._HV]
        zs = []
        for z in self.H_list:
            for v in self.V_list:
                if (gi * v.inv() * z) in self.U_set:
                    zs.append(z)
                    break
        return xs, ys, zs

    # --- theta ---------------------------------------------------------------------------

    def choose_w_twist(self, g: GroupElem) -> GroupElem:
        """The element x of W, chosen componentwise, with (gx)_11 a unit."""
        a, b = g.entries[0].residues, g.entries[1].residues
        pattern = []
        for i, comp in enumerate(self.ring.components):
            if a[i] % comp.prime:
                pattern.append(False)
            elif b[i] % comp.prime:
                pattern.append(True)
            else:
                raise UnsupportedRingError(f"component {i} of {g!r}: neither a nor b is a unit")
        x = self.w_pattern(pattern)
        if not self.gamma1_member(g * x):
            raise CheckFailure(f"twist of {g!r} did not land in Gamma_1")
        return x

    def theta_direct(self, g: GroupElem) -> MatU:
        ctx = self.ctx
        return MatU(*(ctx.make_u(e) for e in g.entries))

    def theta_restricted(self, g: GroupElem) -> MatU:
        """theta on U, V, H or W through the group-language recipes."""
        cache = self._theta_cache
        hit = cache.get(g)
        if hit is not None:
            return hit
        ctx = self.ctx
        one, zero = ctx.u, ctx.identity
        if g in self.U_set:
            out = MatU(one, g, zero, one)
        elif g in self.V_set:
            out = MatU(one, zero, g.inv() ^ ctx.w, one)
        elif g in self.H_set:
            out = self._theta_torus(g)
        elif g in self.W_set:
            ut = self.vhu_decompose(ctx.u ^ g)[2]
            out = MatU(ut, ut.inv() * one, one.inv() * ut, ut)
        else:
            raise DomainError(f"{g!r} is in none of U, V, H, W")
        if g in self.U_set or g in self.V_set:
            return out
        cache[g] = out
        return out

    @cached_property
    def _theta_cache(self) -> dict:
        return {}

    def _theta_torus(self, g: GroupElem) -> MatU:
        ctx = self.ctx
        w, wi = ctx.w, ctx.w.inv()
        for y4 in self.U_list:
            # solve g = w^-1 y4 w y1 w^-1 y4 for y1
            y1 = ctx.product([(wi * y4 * w).inv(), g, (wi * y4).inv()])
            if y1 in self.U_set and self.star_mul(y4, y1) == ctx.u:
                return MatU(y1, ctx.identity, ctx.identity, y4)
        raise DomainError(f"no torus coordinates for {g!r}")

    def theta_definable(self, g: GroupElem) -> MatU:
        """theta(g) = theta(v~) theta(h~) theta(u~) theta(x)^-1 with gx in the big cell."""
        R = self.interpreted_ring
        x = self.choose_w_twist(g)
        v_, h_, u_ = self.vhu_decompose(g * x)
        A = R.matmul(R.matmul(self.theta_restricted(v_), self.theta_restricted(h_)), self.theta_restricted(u_))
        return R.matmul(A, R.inverse(self.theta_restricted(x)))

    def decode_matrix(self, A: MatU) -> Mat2:
        return Mat2(*(self.decode(e) for e in A.entries))

    def theta_agrees(self, g: GroupElem) -> bool:
        """theta_definable(g) equals theta_direct(g), modulo the quotient."""
        A = self.theta_definable(g)
        B = self.theta_direct(g)
        if A == B:
            return True
        if self.ctx.quotient is QuotientKind.TRIVIAL:
            return False
        return quotient_equiv(self.decode_matrix(A), self.decode_matrix(B), self.ctx.quotient)

    def roundtrip_ring(self, r: RingElem) -> RingElem:
        return self.decode(self.ctx.make_u(r))

    def roundtrip_group(self, g: GroupElem) -> GroupElem:
        return self.ctx.element(self.decode_matrix(self.theta_definable(g)))


class _NotClosed(Exception):
    def __init__(self, elem):
        self.elem = elem

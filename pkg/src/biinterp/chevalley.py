"""SL3 as the rank-2 Chevalley group of type A2.

Root subgroups are the elementary one-parameter subgroups; phi_alpha embeds
SL2 into the 2x2 block of a positive root; width_decompose writes any element
as a bounded product of root elements by elimination.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from biinterp.errors import CheckFailure, TooLargeError, UnsupportedRingError
from biinterp.groups import GroupElem, Mat2, MatrixGroup, QuotientKind, scalars_with_power_one
from biinterp.interp import DefinabilityReport, InterpretedRing, SL2Interpretation, compare_sets
from biinterp.ring import ProductRing, RingElem, inv
from biinterp.sl2 import GroupCtx

KLEMMA_GUARD = 10**7

POSITIVE_ROOTS = 3
FUNDAMENTAL_ROOTS = 2
LONGEST_WEYL_WORD = 3
N1 = POSITIVE_ROOTS + FUNDAMENTAL_ROOTS + LONGEST_WEYL_WORD
WIDTH_BOUND = 8 * POSITIVE_ROOTS * N1


class RootA2(enum.Enum):
    A1 = (0, 1)
    A2 = (1, 2)
    A1A2 = (0, 2)
    NEG_A1 = (1, 0)
    NEG_A2 = (2, 1)
    NEG_A1A2 = (2, 0)

    @property
    def position(self) -> tuple[int, int]:
        return self.value

    @property
    def is_positive(self) -> bool:
        return self.value[0] < self.value[1]

    @property
    def negative(self) -> "RootA2":
        i, j = self.value
        return RootA2((j, i))

    @classmethod
    def at(cls, i: int, j: int) -> "RootA2":
        return cls((i, j))


def sl3(ring: ProductRing) -> MatrixGroup:
    return MatrixGroup(ring, 3)


def x_root(G: MatrixGroup, alpha: RootA2, r) -> GroupElem:
    """exp(r X_alpha) = 1 + r E_ij in the natural representation."""
    i, j = alpha.position
    return G.elementary(i, j, r)


def phi(G: MatrixGroup, alpha: RootA2, m) -> GroupElem:
    """Embed a 2x2 matrix into the rows/columns of the positive root ``alpha``."""
    if not alpha.is_positive:
        raise ValueError("phi is defined for positive roots")
    if isinstance(m, GroupElem):
        a, b, c, d = m.codes
    elif isinstance(m, Mat2):
        a, b, c, d = (e.code for e in m.entries)
    else:
        a, b, c, d = m
    i, j = alpha.position
    codes = list(G.identity.codes)
    codes[i * 3 + i], codes[i * 3 + j], codes[j * 3 + i], codes[j * 3 + j] = a, b, c, d
    return G.element(codes)


def block(alpha: RootA2, g: GroupElem) -> tuple[int, int, int, int]:
    i, j = alpha.position
    c = g.codes
    return c[i * 3 + i], c[i * 3 + j], c[j * 3 + i], c[j * 3 + j]


def k_subgroup(G: MatrixGroup, alpha: RootA2) -> set[GroupElem]:
    return {phi(G, alpha, m) for m in MatrixGroup(G.ring, 2).enumerate()}


def commutator(g: GroupElem, h: GroupElem) -> GroupElem:
    return g.inv() * h.inv() * g * h


# --- K_alpha as an alternating product of root subgroups -----------------------------


def alternating_product(G: MatrixGroup, alpha: RootA2, length: int = 8):
    """Forward image of U_-a U_a U_-a ... (``length`` factors).

    Returns ``{element: first parameter tuple reaching it}``, where tuples are
    compared in enumeration order.
    """
    ring = G.ring
    elems = ring.elements()
    roots = [alpha.negative if k % 2 == 0 else alpha for k in range(length)]
    frontier = {G.identity: ()}
    for root in roots:
        factors = [(r, x_root(G, root, r)) for r in elems]
        nxt: dict[GroupElem, tuple] = {}
        for g, params in frontier.items():
            for r, x in factors:
                h = g * x
                cand = params + (r,)
                old = nxt.get(h)
                if old is None or _param_key(cand) < _param_key(old):
                    nxt[h] = cand
        frontier = nxt
    return frontier


def _param_key(params):
    return tuple(p.sort_key() for p in params)


def verify_klemma(G: MatrixGroup, alpha: RootA2) -> DefinabilityReport:
    started = time.perf_counter()
    if G.ring.order**8 > KLEMMA_GUARD:
        raise TooLargeError(
            f"|R|^8 = {G.ring.order ** 8} tuples exceeds the guard; use a single-component ring such as F5"
        )
    image = alternating_product(G, alpha)
    report = compare_sets(f"sl3-klemma[{alpha.name}]", image.keys(), k_subgroup(G, alpha), started)
    report.checked = G.ring.order**8
    return report


# --- centralizer of a root element ------------------------------------------------------


def _batch_mul(A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    return np.einsum("...ij,...jk->...ik", A, B) % n


def centralizer_array(G: MatrixGroup, g: GroupElem, elements: np.ndarray | None = None) -> np.ndarray:
    arr = G.enumerate_array() if elements is None else elements
    n = G.n
    M = arr.reshape(-1, 3, 3)
    x = np.array(g.codes, dtype=np.int64).reshape(3, 3)
    keep = np.all(_batch_mul(M, x, n) == _batch_mul(x, M, n), axis=(1, 2))
    return arr[keep]


def centre_of(arr: np.ndarray, n: int, block_size: int = 256) -> np.ndarray:
    """Rows of ``arr`` commuting with every row of ``arr`` (pairwise scan)."""
    M = arr.reshape(-1, 3, 3)
    keep = np.ones(len(arr), dtype=bool)
    for start in range(0, len(arr), block_size):
        Z = M[start:start + block_size]
        zc = np.einsum("zij,cjk->zcik", Z, M) % n
        cz = np.einsum("cij,zjk->zcik", M, Z) % n
        keep[start:start + block_size] = np.all(zc == cz, axis=(1, 2, 3))
    return arr[keep]


def verify_centralizer_identity(G: MatrixGroup, alpha: RootA2) -> DefinabilityReport:
    """Z(C_G(x_alpha(1))) against U_alpha Z(G)."""
    started = time.perf_counter()
    ua = x_root(G, alpha, 1)
    C = centralizer_array(G, ua)
    ZC = centre_of(C, G.n)
    computed = {GroupElem(G, tuple(int(v) for v in row)) for row in ZC}
    scalars = [G.element((z, 0, 0, 0, z, 0, 0, 0, z)) for z in scalars_with_power_one(G.ring, 3)]
    oracle = {x_root(G, alpha, r) * z for r in G.ring.elements() for z in scalars}
    report = compare_sets(f"sl3-centralizer[{alpha.name}]", computed, oracle, started,
                          note=f"|C| = {len(C)}, |Z(G)| = {len(scalars)}")
    report.checked = len(G.enumerate_array()) + len(C) ** 2
    return report


# --- bounded elementary width -----------------------------------------------------------


@dataclass(frozen=True)
class WidthDecomposition:
    factors: tuple[tuple[RootA2, RingElem], ...]
    bound: int = WIDTH_BOUND

    def __len__(self):
        return len(self.factors)

    def product(self, G: MatrixGroup) -> GroupElem:
        return G.product(x_root(G, root, r) for root, r in self.factors)


def _torus_factors(alpha: RootA2, xi: RingElem) -> list[tuple[RootA2, RingElem]]:
    """phi_alpha(h(xi)) as root elements, via h(xi) = v(xi) u(1/xi) v(xi) w^-1."""
    if xi == 1:
        return []
    neg = alpha.negative
    one = xi.ring.one
    # v(lam) = (1,0;-lam,1) maps to x_{-alpha}(-lam); w^-1 = u(-1) v(-1) u(-1)
    return [
        (neg, -xi),
        (alpha, inv(xi)),
        (neg, -xi),
        (alpha, -one),
        (neg, one),
        (alpha, -one),
    ]


def _unit_pivot(ring: ProductRing, a: list[int], rest: list[list[int]]) -> list[RingElem]:
    """Per component, the first multipliers making ``a + sum m_k rest_k`` a unit."""
    comps = ring.components
    chosen = [[0] * len(comps) for _ in rest]
    for ci, comp in enumerate(comps):
        m = comp.size
        ar = a[ci]
        for mults in itertools.product(range(m), repeat=len(rest)):
            val = ar + sum(k * r[ci] for k, r in zip(mults, rest))
            if val % comp.prime:
                for slot, k in enumerate(mults):
                    chosen[slot][ci] = k
                break
        else:
            raise UnsupportedRingError(f"no unit pivot in component {ci}")
    return [ring(c) for c in chosen]


def _sl2_factors(alpha: RootA2, p: RingElem, q: RingElem, r: RingElem, s: RingElem):
    """Root factors for the SL2 block (p, q; r, s) embedded at ``alpha``."""
    ring = p.ring
    neg = alpha.negative
    out = []
    if not p.is_unit():
        (t,) = _unit_pivot(ring, list(p.residues), [list(r.residues)])
        # (p,q;r,s) = u(-t) . u(t)(p,q;r,s)
        out.append((alpha, -t))
        p, q = p + t * r, q + t * s
    pi = inv(p)
    out.append((neg, pi * r))                 # v(-r/p) = x_{-alpha}(r/p)
    out.extend(_torus_factors(alpha, pi))     # h(1/p)
    out.append((alpha, pi * q))               # u(q/p)
    return out


def width_decompose(g: GroupElem) -> WidthDecomposition:
    """Write ``g`` in SL3 as a product of root elements by elimination."""
    G = g.group
    ring = G.ring
    M = g.entries
    left: list[tuple[RootA2, RingElem]] = []
    right: list[tuple[RootA2, RingElem]] = []

    def row_add(dst, src, k):
        for col in range(3):
            M[dst * 3 + col] = M[dst * 3 + col] + k * M[src * 3 + col]

    def col_add(dst, src, k):
        for row in range(3):
            M[row * 3 + dst] = M[row * 3 + dst] + k * M[row * 3 + src]

    if not M[0].is_unit():
        s, t = _unit_pivot(ring, list(M[0].residues), [list(M[3].residues), list(M[6].residues)])
        for src, k in ((1, s), (2, t)):
            row_add(0, src, k)
            left.append((RootA2.at(0, src), k))
    a = M[0]
    ai = inv(a)
    for rowi in (1, 2):
        k = -M[rowi * 3] * ai
        row_add(rowi, 0, k)
        left.append((RootA2.at(rowi, 0), k))
    for coli in (1, 2):
        k = -M[coli] * ai
        col_add(coli, 0, k)
        right.append((RootA2.at(0, coli), k))
    # M = diag(a, B) = phi_A1(h(1/a)) . phi_A2(B') with B' = diag(a, 1) B
    p, q, r, s = a * M[4], a * M[5], M[7], M[8]
    middle = _torus_factors(RootA2.A1, ai) + _sl2_factors(RootA2.A2, p, q, r, s)
    factors = [(root, -k) for root, k in left] + middle + [(root, -k) for root, k in reversed(right)]
    factors = tuple((root, k) for root, k in factors if k != 0)
    dec = WidthDecomposition(factors)
    if dec.product(G) != g:
        raise CheckFailure(f"width factors of {g!r} do not multiply back")
    if len(dec) > WIDTH_BOUND:
        raise CheckFailure(f"width {len(dec)} of {g!r} exceeds {WIDTH_BOUND}")
    return dec


# --- theta for SL3 ---------------------------------------------------------------------


class SL3Interpretation:
    """The ring as U_gamma inside SL3 and the entrywise coordinate map."""

    def __init__(self, ring: ProductRing, gamma: RootA2 = RootA2.A1):
        if not gamma.is_positive:
            raise ValueError("gamma must be a positive root")
        self.ring = ring
        self.gamma = gamma
        self.G = sl3(ring)
        self.sl2 = SL2Interpretation(GroupCtx(ring, QuotientKind.TRIVIAL))

    def encode(self, r: RingElem) -> GroupElem:
        return x_root(self.G, self.gamma, r)

    @cached_property
    def U_gamma(self) -> list[GroupElem]:
        return [self.encode(r) for r in self.ring.elements()]

    def _to_sl2(self, y: GroupElem) -> GroupElem:
        return self.sl2.ctx.element(block(self.gamma, y))

    def _star(self, y1: GroupElem, y2: GroupElem) -> GroupElem:
        return phi(self.G, self.gamma, self.sl2.star_mul(self._to_sl2(y1), self._to_sl2(y2)))

    @cached_property
    def interpreted_ring(self) -> InterpretedRing:
        return InterpretedRing(self.U_gamma, self.G.mul, self._star, self.G.identity, self.encode(1))

    @cached_property
    def weyl_movers(self) -> dict[RootA2, GroupElem]:
        """For each root beta, a signed permutation n with x_beta(1)^n = x_gamma(1)."""
        G = self.G
        target = self.encode(1)
        movers = {}
        monomials = []
        for perm in itertools.permutations(range(3)):
            for signs in itertools.product((1, -1), repeat=3):
                codes = [0] * 9
                for row, col in enumerate(perm):
                    codes[row * 3 + col] = signs[row]
                if G.det([c % G.n for c in codes]) == 1 % G.n:
                    monomials.append(G.element(codes))
        for beta in RootA2:
            xb = x_root(G, beta, 1)
            movers[beta] = next(n for n in monomials if (xb ^ n) == target)
        return movers

    def theta3_direct(self, g: GroupElem) -> tuple[GroupElem, ...]:
        return tuple(self.encode(e) for e in g.entries)

    def theta_root(self, beta: RootA2, x: GroupElem) -> tuple[GroupElem, ...]:
        """theta on U_beta: the interpreted elementary matrix with x^n_beta at beta."""
        zero, one = self.G.identity, self.encode(1)
        mat = [one if k % 4 == 0 else zero for k in range(9)]
        i, j = beta.position
        mat[i * 3 + j] = x ^ self.weyl_movers[beta]
        return tuple(mat)

    def matmul(self, A, B):
        R = self.interpreted_ring
        out = []
        for i in range(3):
            for k in range(3):
                acc = R.mul(A[i * 3], B[k])
                for j in (1, 2):
                    acc = R.add(acc, R.mul(A[i * 3 + j], B[j * 3 + k]))
                out.append(acc)
        return tuple(out)

    def theta3_definable(self, g: GroupElem) -> tuple[GroupElem, ...]:
        dec = width_decompose(g)
        zero, one = self.G.identity, self.encode(1)
        A = tuple(one if k % 4 == 0 else zero for k in range(9))
        for beta, r in dec.factors:
            A = self.matmul(A, self.theta_root(beta, x_root(self.G, beta, r)))
        return A

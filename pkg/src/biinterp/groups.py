"""SL_d over a product ring, optionally modulo a central subgroup of scalars.

Group elements are canonical coset representatives: the lexicographically
smallest matrix ``M*z`` over the scalars ``z`` of the chosen central subgroup,
comparing entries row-major and, inside an entry, residues left to right.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from biinterp.errors import LayoutError, TooLargeError
from biinterp.ring import ProductRing, RingElem

ENUMERATION_GUARD = 10**8
GROUP_SIZE_GUARD = 2 * 10**6
LOCAL_SCAN_GUARD = 2 * 10**7


class QuotientKind(enum.Enum):
    TRIVIAL = "sl2"
    PLUS_MINUS_ONE = "mod-pm1"
    FULL_CENTRE = "psl2"

    @classmethod
    def from_name(cls, name: str) -> "QuotientKind":
        for q in cls:
            if name in (q.value, q.name.lower()):
                return q
        raise ValueError(f"unknown quotient {name!r}")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix of ring elements with determinant 1."""

    a: RingElem
    b: RingElem
    c: RingElem
    d: RingElem

    def __post_init__(self):
        if (self.a * self.d - self.b * self.c) != 1:
            raise ValueError(f"determinant of {self} is not 1")

    @property
    def entries(self) -> tuple[RingElem, ...]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Mat2") -> "Mat2":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def scale(self, z: RingElem) -> "Mat2":
        return Mat2(*(x * z for x in self.entries))

    def residue_rows(self) -> list:
        return [[list(self.a.residues), list(self.b.residues)],
                [list(self.c.residues), list(self.d.residues)]]


def _central_scalars(ring: ProductRing, quotient: QuotientKind) -> tuple[int, ...]:
    if quotient is QuotientKind.TRIVIAL:
        return (1 % ring.order,)
    if quotient is QuotientKind.PLUS_MINUS_ONE:
        return tuple(sorted({1 % ring.order, (ring.order - 1) % ring.order}))
    return tuple(c for c in range(ring.order) if c * c % ring.order == 1 % ring.order)


def scalars_with_power_one(ring: ProductRing, d: int) -> tuple[int, ...]:
    return tuple(c for c in range(ring.order) if pow(c, d, ring.order) == 1 % ring.order)


class GroupElem:
    """Element of a :class:`MatrixGroup`; ``codes`` is the canonical rep.

    ``g * h`` multiplies, ``g ^ x`` is the conjugate ``x^-1 g x``,
    ``g ** n`` powers and ``g.inv()`` inverts.
    """

    __slots__ = ("group", "codes")

    def __init__(self, group: "MatrixGroup", codes: tuple[int, ...]):
        self.group = group
        self.codes = codes

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return self.codes == other.codes and (
            self.group is other.group or self.group == other.group
        )

    def __hash__(self):
        return hash(self.codes)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        return self.group.mul(self, other)

    def __xor__(self, other: "GroupElem") -> "GroupElem":
        return self.group.conj(self, other)

    def __pow__(self, n: int) -> "GroupElem":
        return self.group.pow(self, n)

    def inv(self) -> "GroupElem":
        return self.group.inv(self)

    @property
    def quotient(self) -> QuotientKind:
        return self.group.quotient

    @property
    def entries(self) -> list[RingElem]:
        ring = self.group.ring
        return [RingElem(ring, c) for c in self.codes]

    def entry(self, i: int, j: int) -> RingElem:
        return RingElem(self.group.ring, self.codes[i * self.group.dim + j])

    @property
    def rep(self) -> Mat2:
        if self.group.dim != 2:
            raise TypeError("rep is only defined for 2x2 groups")
        return Mat2(*self.entries)

    def residue_rows(self) -> list:
        d = self.group.dim
        res = [list(e.residues) for e in self.entries]
        return [res[i * d:(i + 1) * d] for i in range(d)]

    def sort_key(self) -> tuple[int, ...]:
        return self.group.key(self.codes)

    def __repr__(self):
        d = self.group.dim
        rows = [self.codes[i * d:(i + 1) * d] for i in range(d)]
        if len(self.group.ring.moduli) == 1:
            body = ";".join(",".join(str(c) for c in row) for row in rows)
        else:
            rr = self.group.ring.residues_of
            body = ";".join(",".join(str(rr(c)) for c in row) for row in rows)
        return f"[{body}]"


class MatrixGroup:
    """SL_dim(ring), modulo the scalars selected by ``quotient``."""

    def __init__(self, ring: ProductRing, dim: int = 2, quotient: QuotientKind = QuotientKind.TRIVIAL):
        if dim not in (2, 3):
            raise ValueError("only SL2 and SL3 are supported")
        self.ring = ring
        self.dim = dim
        self.quotient = quotient
        self.n = ring.order
        if quotient is QuotientKind.TRIVIAL:
            self.scalars = (1 % self.n,)
        elif dim == 2:
            self.scalars = _central_scalars(ring, quotient)
        else:
            self.scalars = scalars_with_power_one(ring, 3)
            if quotient is QuotientKind.PLUS_MINUS_ONE:
                raise ValueError("-1 is not in SL3")
        self._rank = ring.rank
        self.identity = self.element(self._identity_codes())

    def __eq__(self, other):
        return (
            isinstance(other, MatrixGroup)
            and self.ring == other.ring
            and self.dim == other.dim
            and self.quotient == other.quotient
        )

    def __hash__(self):
        return hash((self.ring, self.dim, self.quotient))

    def __repr__(self):
        q = "" if self.quotient is QuotientKind.TRIVIAL else f"/{self.quotient}"
        return f"SL{self.dim}({self.ring}){q}"

    def _identity_codes(self):
        d = self.dim
        return tuple(1 % self.n if i % (d + 1) == 0 else 0 for i in range(d * d))

    # --- canonical form --------------------------------------------------

    def key(self, codes: Sequence[int]) -> tuple[int, ...]:
        rank = self._rank
        return tuple(rank[c] for c in codes)

    def canonical(self, codes: tuple[int, ...]) -> tuple[int, ...]:
        if len(self.scalars) == 1:
            return codes
        n = self.n
        best = None
        best_key = None
        for z in self.scalars:
            cand = tuple(c * z % n for c in codes)
            k = self.key(cand)
            if best_key is None or k < best_key:
                best, best_key = cand, k
        return best

    def element(self, entries) -> GroupElem:
        """Build a group element from ints, RingElems or a :class:`Mat2`."""
        if isinstance(entries, Mat2):
            entries = entries.entries
        codes = []
        for e in entries:
            if isinstance(e, RingElem):
                self.ring.check(e)
                codes.append(e.code)
            else:
                codes.append(e % self.n)
        codes = tuple(codes)
        if len(codes) != self.dim**2:
            raise ValueError(f"expected {self.dim ** 2} entries")
        if self.det(codes) != 1 % self.n:
            raise ValueError(f"matrix {codes} does not have determinant 1")
        return GroupElem(self, self.canonical(codes))

    def from_residue_rows(self, rows) -> GroupElem:
        """Build from ``rows[i][j]`` = residue sequence (or int) of entry (i,j)."""
        flat = []
        for row in rows:
            for e in row:
                flat.append(self.ring(e))
        return self.element(flat)

    def det(self, codes: Sequence[int]) -> int:
        n = self.n
        if self.dim == 2:
            a, b, c, d = codes
            return (a * d - b * c) % n
        a, b, c, d, e, f, g, h, i = codes
        return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % n

    # --- group operations --------------------------------------------------

    def _check(self, g: GroupElem):
        if g.group is not self and g.group != self:
            raise LayoutError(f"element of {g.group} used in {self}")

    def mul_codes(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        n = self.n
        if self.dim == 2:
            a, b, c, d = x
            e, f, g, h = y
            return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)
        a0, a1, a2, a3, a4, a5, a6, a7, a8 = x
        b0, b1, b2, b3, b4, b5, b6, b7, b8 = y
        return (
            (a0 * b0 + a1 * b3 + a2 * b6) % n,
            (a0 * b1 + a1 * b4 + a2 * b7) % n,
            (a0 * b2 + a1 * b5 + a2 * b8) % n,
            (a3 * b0 + a4 * b3 + a5 * b6) % n,
            (a3 * b1 + a4 * b4 + a5 * b7) % n,
            (a3 * b2 + a4 * b5 + a5 * b8) % n,
            (a6 * b0 + a7 * b3 + a8 * b6) % n,
            (a6 * b1 + a7 * b4 + a8 * b7) % n,
            (a6 * b2 + a7 * b5 + a8 * b8) % n,
        )

    def inv_codes(self, x: Sequence[int]) -> tuple[int, ...]:
        n = self.n
        if self.dim == 2:
            a, b, c, d = x
            return (d, -b % n, -c % n, a)
        a, b, c, d, e, f, g, h, i = x
        # adjugate; determinant is 1
        return (
            (e * i - f * h) % n, (c * h - b * i) % n, (b * f - c * e) % n,
            (f * g - d * i) % n, (a * i - c * g) % n, (c * d - a * f) % n,
            (d * h - e * g) % n, (b * g - a * h) % n, (a * e - b * d) % n,
        )

    def mul(self, g: GroupElem, h: GroupElem) -> GroupElem:
        self._check(g)
        self._check(h)
        return GroupElem(self, self.canonical(self.mul_codes(g.codes, h.codes)))

    def inv(self, g: GroupElem) -> GroupElem:
        self._check(g)
        return GroupElem(self, self.canonical(self.inv_codes(g.codes)))

    def conj(self, g: GroupElem, x: GroupElem) -> GroupElem:
        """``x^-1 g x``."""
        self._check(g)
        self._check(x)
        codes = self.mul_codes(self.mul_codes(self.inv_codes(x.codes), g.codes), x.codes)
        return GroupElem(self, self.canonical(codes))

    def pow(self, g: GroupElem, n: int) -> GroupElem:
        self._check(g)
        base = g.codes if n >= 0 else self.inv_codes(g.codes)
        n = abs(n)
        acc = self.identity.codes
        while n:
            if n & 1:
                acc = self.mul_codes(acc, base)
            base = self.mul_codes(base, base)
            n >>= 1
        return GroupElem(self, self.canonical(acc))

    def product(self, elems: Iterable[GroupElem]) -> GroupElem:
        acc = self.identity.codes
        for e in elems:
            self._check(e)
            acc = self.mul_codes(acc, e.codes)
        return GroupElem(self, self.canonical(acc))

    def commute(self, g: GroupElem, h: GroupElem) -> bool:
        return self.mul(g, h) == self.mul(h, g)

    # --- elementary matrices -------------------------------------------------

    def elementary(self, i: int, j: int, r) -> GroupElem:
        """Identity plus ``r`` at row ``i``, column ``j`` (0-based, i != j)."""
        codes = list(self._identity_codes())
        codes[i * self.dim + j] = self.ring(r).code
        return GroupElem(self, self.canonical(tuple(codes)))

    def generators(self) -> list[GroupElem]:
        """Elementary matrices with entry 1; they generate SL_d(Z/n)."""
        return [
            self.elementary(i, j, 1)
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        ]

    # --- enumeration -------------------------------------------------------

    def size_estimate(self) -> int:
        return self.n ** (self.dim**2)

    @cached_property
    def _elements(self) -> tuple[GroupElem, ...]:
        arr = self.enumerate_array()
        return tuple(GroupElem(self, tuple(int(x) for x in row)) for row in arr)

    def enumerate(self) -> tuple[GroupElem, ...]:
        """Every group element once, sorted by canonical key.

        Raises:
            TooLargeError: if ``|R|^(d^2)`` exceeds the enumeration guard.
        """
        return self._elements

    def __len__(self):
        return len(self._elements)

    def enumerate_array(self) -> np.ndarray:
        """Canonical codes of every element as an ``(N, d^2)`` array, sorted."""
        if self.dim == 2 and self.size_estimate() > ENUMERATION_GUARD:
            raise TooLargeError(
                f"{self!r} needs {self.size_estimate():.3g} candidate matrices; "
                "use a smaller ring (Bruhat-cell enumeration is not implemented)"
            )
        per_component = [_local_special_linear(m, self.dim) for m in self.ring.moduli]
        total = math.prod(len(p) for p in per_component)
        if total > GROUP_SIZE_GUARD:
            raise TooLargeError(f"{self!r} has {total} elements, above the scan guard")
        # combine component matrices entrywise through the idempotent basis
        arr = np.zeros((1, self.dim**2), dtype=np.int64)
        for local, e in zip(per_component, self.ring._basis):
            arr = (arr[:, None, :] + local[None, :, :].astype(np.int64) * e) % self.n
            arr = arr.reshape(-1, self.dim**2)
        if len(self.scalars) > 1:
            arr = self._canonical_array(arr)
            arr = np.unique(arr, axis=0)
        rank = np.asarray(self._rank, dtype=np.int64)
        keys = rank[arr]
        order = np.lexsort(keys.T[::-1])
        return arr[order]

    def _canonical_array(self, arr: np.ndarray) -> np.ndarray:
        rank = np.asarray(self._rank, dtype=np.int64)
        best = arr.copy()
        best_key = rank[best]
        for z in self.scalars[1:]:
            cand = arr * z % self.n
            ck = rank[cand]
            # lexicographic comparison row by row
            diff = ck != best_key
            first = np.argmax(diff, axis=1)
            rows = np.arange(len(arr))
            smaller = diff.any(axis=1) & (ck[rows, first] < best_key[rows, first])
            best[smaller] = cand[smaller]
            best_key[smaller] = ck[smaller]
        return best

    # --- brute-force scans -------------------------------------------------

    def centralizer(self, g: GroupElem) -> list[GroupElem]:
        return [x for x in self.enumerate() if self.commute(x, g)]

    def centre(self) -> list[GroupElem]:
        """Elements commuting with every generator (hence with everything)."""
        gens = self.generators()
        return [z for z in self.enumerate() if all(self.commute(z, s) for s in gens)]


_LOCAL_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _local_special_linear(m: int, dim: int) -> np.ndarray:
    """All determinant-1 matrices over Z/m, as rows of row-major entries."""
    key = (m, dim)
    if key in _LOCAL_CACHE:
        return _LOCAL_CACHE[key]
    k = dim * dim
    if m**k > LOCAL_SCAN_GUARD:
        raise TooLargeError(f"local SL{dim}(Z/{m}) scan needs {m ** k} candidates")
    grids = np.indices((m,) * k, dtype=np.int16).reshape(k, -1).T
    g = grids.astype(np.int64)
    if dim == 2:
        det = g[:, 0] * g[:, 3] - g[:, 1] * g[:, 2]
    else:
        det = (
            g[:, 0] * (g[:, 4] * g[:, 8] - g[:, 5] * g[:, 7])
            - g[:, 1] * (g[:, 3] * g[:, 8] - g[:, 5] * g[:, 6])
            + g[:, 2] * (g[:, 3] * g[:, 7] - g[:, 4] * g[:, 6])
        )
    out = grids[det % m == 1 % m]
    _LOCAL_CACHE[key] = out
    return out

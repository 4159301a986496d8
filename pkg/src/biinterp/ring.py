"""Finite models of the adelic subring: products of residue rings Z/p^k.

An element of ``Z/p1^k1 x ... x Z/pm^km`` is stored as its Chinese-remainder
code, a single integer modulo the product of the component sizes.  The
residue view (one least non-negative residue per component) is derived on
demand and is what orderings, printing and the public ``residues`` field use.
Components must therefore have distinct primes, which is also the shape of
the ring being modelled: one local factor per rational prime.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from biinterp.errors import ConfigError, DecompositionError, LayoutError, NonUnitError

MAX_CARRIER = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class LocalRing:
    """The residue ring Z/p^k standing in for one local factor."""

    prime: int
    exponent: int = 1

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ConfigError(f"{self.prime} is not a prime")
        if self.exponent < 1:
            raise ConfigError(f"exponent must be >= 1, got {self.exponent}")
        if self.prime**self.exponent > MAX_CARRIER:
            raise ConfigError(f"carrier {self.prime}^{self.exponent} exceeds 2^31")

    @property
    def size(self) -> int:
        return self.prime**self.exponent

    @property
    def is_field(self) -> bool:
        return self.exponent == 1

    def __str__(self):
        return str(self.prime) if self.exponent == 1 else f"{self.prime}^{self.exponent}"


class ProductRing:
    """A finite product of :class:`LocalRing` components with fixed order."""

    def __init__(self, components: Iterable[LocalRing]):
        components = tuple(components)
        if not components:
            raise ConfigError("a product ring needs at least one component")
        primes = [c.prime for c in components]
        if len(set(primes)) != len(primes):
            raise ConfigError(f"repeated prime in ring components {primes}")
        self.components = components
        self.moduli = tuple(c.size for c in components)
        self.order = math.prod(self.moduli)
        # idempotent basis: basis[i] is 1 mod moduli[i] and 0 mod the others
        basis = []
        for m in self.moduli:
            rest = self.order // m
            basis.append(rest * pow(rest, -1, m) % self.order)
        self._basis = tuple(basis)
        self._hash = hash(self.moduli)

    @classmethod
    def parse(cls, descriptor: str) -> "ProductRing":
        """Parse a descriptor such as ``"5,7"`` or ``"3^2,2^3,5"``."""
        comps = []
        for token in descriptor.split(","):
            token = token.strip()
            if not token:
                raise ConfigError(f"empty component in ring descriptor {descriptor!r}")
            base, _, exp = token.partition("^")
            try:
                p = int(base)
                k = int(exp) if exp else 1
            except ValueError:
                raise ConfigError(f"malformed ring component {token!r}") from None
            comps.append(LocalRing(p, k))
        return cls(comps)

    @classmethod
    def of(cls, *parts) -> "ProductRing":
        """Shorthand: ``ProductRing.of(5, 7, (3, 2))``."""
        comps = [LocalRing(*s) if isinstance(s, tuple) else LocalRing(s) for s in parts]
        return cls(comps)

    def __eq__(self, other):
        return isinstance(other, ProductRing) and self.moduli == other.moduli

    def __hash__(self):
        return self._hash

    def __str__(self):
        return ",".join(str(c) for c in self.components)

    def __repr__(self):
        return f"ProductRing({str(self)!r})"

    def __len__(self):
        return self.order

    # --- conversions -----------------------------------------------------

    def code(self, residues: Sequence[int]) -> int:
        if len(residues) != len(self.moduli):
            raise LayoutError(
                f"expected {len(self.moduli)} residues, got {len(residues)}"
            )
        return sum(r * e for r, e in zip(residues, self._basis)) % self.order

    def residues_of(self, code: int) -> tuple[int, ...]:
        return tuple(code % m for m in self.moduli)

    def __call__(self, value) -> "RingElem":
        """Coerce an int (diagonal embedding) or a residue sequence."""
        if isinstance(value, RingElem):
            self.check(value)
            return value
        if isinstance(value, int):
            return RingElem(self, value % self.order)
        return RingElem(self, self.code(tuple(value)))

    def from_code(self, code: int) -> "RingElem":
        return RingElem(self, code % self.order)

    def check(self, a: "RingElem"):
        if a.ring is not self and a.ring != self:
            raise LayoutError(f"element of {a.ring} used in {self}")

    @property
    def zero(self) -> "RingElem":
        return RingElem(self, 0)

    @property
    def one(self) -> "RingElem":
        return RingElem(self, 1 % self.order)

    # --- orderings -------------------------------------------------------

    @cached_property
    def lex_codes(self) -> tuple[int, ...]:
        """All codes sorted by their residue sequences."""
        return tuple(
            self.code(r) for r in itertools.product(*(range(m) for m in self.moduli))
        )

    @cached_property
    def rank(self) -> tuple[int, ...]:
        """``rank[code]`` is the position of ``code`` in :attr:`lex_codes`."""
        table = [0] * self.order
        for i, c in enumerate(self.lex_codes):
            table[c] = i
        return tuple(table)

    def elements(self) -> list["RingElem"]:
        return [RingElem(self, c) for c in self.lex_codes]

    def is_unit_code(self, code: int) -> bool:
        return math.gcd(code, self.order) == 1

    @cached_property
    def unit_codes(self) -> tuple[int, ...]:
        return tuple(c for c in self.lex_codes if self.is_unit_code(c))

    @cached_property
    def unit_count(self) -> int:
        return math.prod((c.prime - 1) * c.prime ** (c.exponent - 1) for c in self.components)

    @property
    def is_product_of_fields(self) -> bool:
        return all(c.is_field for c in self.components)


class RingElem:
    """An element of a :class:`ProductRing`.

    Supports ``+``, ``-``, ``*`` and ``**`` with other elements of the same
    ring or with plain ints (diagonally embedded).
    """

    __slots__ = ("ring", "code")

    def __init__(self, ring: ProductRing, code: int):
        self.ring = ring
        self.code = code

    @property
    def residues(self) -> tuple[int, ...]:
        return self.ring.residues_of(self.code)

    def _other(self, other) -> int:
        if isinstance(other, RingElem):
            if other.ring is not self.ring and other.ring != self.ring:
                raise LayoutError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.code
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, (self.code + o) % self.ring.order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, (self.code - o) % self.ring.order)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, (o - self.code) % self.ring.order)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElem(self.ring, self.code * o % self.ring.order)

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ring, -self.code % self.ring.order)

    def __pow__(self, k: int):
        if k < 0:
            return inv(self) ** -k
        return RingElem(self.ring, pow(self.code, k, self.ring.order))

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.code == other.code and self.ring == other.ring
        if isinstance(other, int):
            return self.code == other % self.ring.order
        return NotImplemented

    def __hash__(self):
        return hash(self.code)

    def sort_key(self) -> int:
        return self.ring.rank[self.code]

    def __lt__(self, other):
        return self.residues < other.residues

    def is_unit(self) -> bool:
        return self.ring.is_unit_code(self.code)

    def __repr__(self):
        r = self.residues
        return f"R{r}" if len(r) > 1 else f"R({r[0]})"


def add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def neg(a: RingElem) -> RingElem:
    return -a


def is_unit(a: RingElem) -> bool:
    return a.is_unit()


def inv(a: RingElem) -> RingElem:
    """Componentwise multiplicative inverse.

    Raises:
        NonUnitError: if some residue shares a factor with its component prime.
    """
    if not a.is_unit():
        for i, (r, c) in enumerate(zip(a.residues, a.ring.components)):
            if r % c.prime == 0:
                raise NonUnitError(f"{a!r} is not a unit (component {i})", i)
    return RingElem(a.ring, pow(a.code, -1, a.ring.order))


def units(ring: ProductRing) -> list[RingElem]:
    """The unit group, in lexicographic order of residue sequences."""
    return [RingElem(ring, c) for c in ring.unit_codes]


# --- square-difference decomposition -------------------------------------


@dataclass(frozen=True)
class SSet:
    """Finite set of ring elements used as additive offsets; sorted."""

    elements: tuple[RingElem, ...]

    def __iter__(self) -> Iterator[RingElem]:
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a):
        return a in self.elements

    def products(self) -> list[RingElem]:
        """The product set S.S, deduplicated and sorted."""
        return _sorted_unique(s * t for s in self.elements for t in self.elements)


@dataclass(frozen=True)
class SquareDiffWitness:
    xi: RingElem
    eta: RingElem
    s: RingElem

    @property
    def value(self) -> RingElem:
        return self.xi * self.xi - self.eta * self.eta + self.s


def _sorted_unique(elems: Iterable[RingElem]) -> list[RingElem]:
    seen = {}
    for e in elems:
        seen.setdefault(e.code, e)
    return sorted(seen.values(), key=RingElem.sort_key)


def local_offsets(comp: LocalRing) -> tuple[int, ...]:
    """Per-component offset residues: {0,+-1} at char 3 and 5, all classes
    mod 8 at char 2, {1} elsewhere."""
    m = comp.size
    if comp.prime in (3, 5):
        return tuple(sorted({0, 1 % m, (m - 1) % m}))
    if comp.prime == 2:
        return tuple(range(min(8, m)))
    return (1 % m,)


def build_S(ring: ProductRing) -> SSet:
    """Cartesian combination of the local offset sets with 0 and 1 adjoined."""
    combos = [ring(res) for res in itertools.product(*(local_offsets(c) for c in ring.components))]
    return SSet(tuple(_sorted_unique(combos + [ring.zero, ring.one])))


@lru_cache(maxsize=None)
def _local_square_diffs(m: int, p: int) -> dict[int, tuple[int, int]]:
    """Map ``target -> (xi, eta)``: the first unit pair with xi^2 - eta^2 = target."""
    table: dict[int, tuple[int, int]] = {}
    us = [x for x in range(m) if x % p != 0]
    for xi in us:
        for eta in us:
            table.setdefault((xi * xi - eta * eta) % m, (xi, eta))
    return table


def decompose_square_diff(a: RingElem, s_set: SSet) -> SquareDiffWitness:
    """Write ``a = xi^2 - eta^2 + s`` with xi, eta units and s in ``s_set``.

    The first offset ``s`` (in the set's order) admitting a solution wins;
    given ``s`` each component takes its lexicographically first ``(xi, eta)``.

    Raises:
        DecompositionError: if no offset works.
    """
    ring = a.ring
    tables = [_local_square_diffs(c.size, c.prime) for c in ring.components]
    ar = a.residues
    for s in s_set:
        sr = s.residues
        xis, etas = [], []
        for table, m, x, y in zip(tables, ring.moduli, ar, sr):
            hit = table.get((x - y) % m)
            if hit is None:
                break
            xis.append(hit[0])
            etas.append(hit[1])
        else:
            return SquareDiffWitness(ring(xis), ring(etas), s)
    raise DecompositionError(f"{a!r} is not of the form xi^2 - eta^2 + s over {ring}")


def rt_member(r: RingElem, T: Iterable[int]) -> bool:
    """True iff prod_{t in T} (r - t) vanishes."""
    T = list(T)
    if not T:
        raise ValueError("T must be non-empty")
    acc = r.ring.one
    for t in T:
        acc = acc * (r - t)
    return acc.code == 0

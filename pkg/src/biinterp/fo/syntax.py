"""Abstract syntax of sorted first-order formulas in the language of groups.

Printing produces the canonical concrete syntax accepted by
:func:`biinterp.fo.parser.parse`; ``parse(str(f)) == f`` for every AST.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

KEYWORDS = frozenset({"exists", "forall", "and", "or", "not", "in"})


# --- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Param:
    name: str

    def __str__(self):
        return "$" + self.name


@dataclass(frozen=True)
class One:
    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Product:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"{self.left} * {_factor(self.right)}"


@dataclass(frozen=True)
class Inverse:
    t: "Term"

    def __str__(self):
        return f"{_factor(self.t)} ^-1"


@dataclass(frozen=True)
class Conj:
    """``base ^ by``, denoting ``by^-1 * base * by``."""

    base: "Term"
    by: "Term"

    def __str__(self):
        return f"{_factor(self.base)} ^ {_base(self.by)}"


Term = Union[Var, Param, One, Product, Inverse, Conj]
ATOMIC_TERMS = (Var, Param, One)


def _factor(t: Term) -> str:
    return f"({t})" if isinstance(t, Product) else str(t)


def _base(t: Term) -> str:
    return str(t) if isinstance(t, ATOMIC_TERMS) else f"({t})"


# --- formulas ----------------------------------------------------------------

# printing levels: 0 formula, 1 disjunction, 2 conjunction, 3 literal


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term

    def show(self, level: int = 0) -> str:
        return f"{self.left} = {self.right}"

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class InSort:
    t: Term
    sort: str

    def show(self, level: int = 0) -> str:
        return f"{self.t} in {self.sort}"

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class Not:
    f: "Formula"

    def show(self, level: int = 0) -> str:
        return "not " + self.f.show(3)

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands")

    def show(self, level: int = 0) -> str:
        s = " and ".join(a.show(3) for a in self.args)
        return f"({s})" if level > 2 else s

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands")

    def show(self, level: int = 0) -> str:
        s = " or ".join(a.show(2) for a in self.args)
        return f"({s})" if level > 1 else s

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class _Quantifier:
    binders: tuple[tuple[str, str], ...]
    body: "Formula"
    keyword = ""

    def __post_init__(self):
        if not self.binders:
            raise ValueError("a quantifier needs at least one binder")

    def show(self, level: int = 0) -> str:
        bs = ", ".join(f"{v}:{s}" for v, s in self.binders)
        text = f"{self.keyword} {bs} . {self.body.show(0)}"
        return f"({text})" if level > 0 else text

    def __str__(self):
        return self.show()


@dataclass(frozen=True)
class Exists(_Quantifier):
    keyword = "exists"


@dataclass(frozen=True)
class Forall(_Quantifier):
    keyword = "forall"


Formula = Union[Eq, InSort, Not, And, Or, Exists, Forall]


# --- traversal helpers ---------------------------------------------------------


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Param, One)):
        return set()
    if isinstance(t, Product):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Inverse):
        return term_vars(t.t)
    return term_vars(t.base) | term_vars(t.by)


def term_params(t: Term) -> set[str]:
    if isinstance(t, Param):
        return {t.name}
    if isinstance(t, (Var, One)):
        return set()
    if isinstance(t, Product):
        return term_params(t.left) | term_params(t.right)
    if isinstance(t, Inverse):
        return term_params(t.t)
    return term_params(t.base) | term_params(t.by)


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, InSort):
        return term_vars(f.t)
    if isinstance(f, Not):
        return free_vars(f.f)
    if isinstance(f, (And, Or)):
        return set().union(*(free_vars(a) for a in f.args))
    return free_vars(f.body) - {v for v, _ in f.binders}


def params(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_params(f.left) | term_params(f.right)
    if isinstance(f, InSort):
        return term_params(f.t)
    if isinstance(f, Not):
        return params(f.f)
    if isinstance(f, (And, Or)):
        return set().union(*(params(a) for a in f.args))
    return params(f.body)


def sort_names(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return set()
    if isinstance(f, InSort):
        return {f.sort}
    if isinstance(f, Not):
        return sort_names(f.f)
    if isinstance(f, (And, Or)):
        return set().union(*(sort_names(a) for a in f.args))
    return {s for _, s in f.binders} | sort_names(f.body)

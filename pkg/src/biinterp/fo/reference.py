"""Naive reference semantics and random AST generation.

The reference evaluator interprets the AST directly by structural recursion,
quantifying over one binder at a time; it shares no code with the compiled
evaluator and serves as its oracle.
"""

from __future__ import annotations

import random

from biinterp.fo.syntax import (
    And,
    Conj,
    Eq,
    Exists,
    Forall,
    InSort,
    Inverse,
    Not,
    One,
    Or,
    Param,
    Product,
    Var,
)


def naive_term(t, env, params, group):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Param):
        return params[t.name]
    if isinstance(t, One):
        return group.identity
    if isinstance(t, Product):
        return group.mul(naive_term(t.left, env, params, group), naive_term(t.right, env, params, group))
    if isinstance(t, Inverse):
        return group.inv(naive_term(t.t, env, params, group))
    if isinstance(t, Conj):
        g = naive_term(t.base, env, params, group)
        x = naive_term(t.by, env, params, group)
        return group.mul(group.mul(group.inv(x), g), x)
    raise TypeError(f"not a term: {t!r}")


def naive_eval(f, sorts, params, env, group) -> bool:
    if isinstance(f, Eq):
        return naive_term(f.left, env, params, group) == naive_term(f.right, env, params, group)
    if isinstance(f, InSort):
        return naive_term(f.t, env, params, group) in list(sorts[f.sort])
    if isinstance(f, Not):
        return not naive_eval(f.f, sorts, params, env, group)
    if isinstance(f, And):
        result = True
        for a in f.args:
            result = naive_eval(a, sorts, params, env, group) and result
        return result
    if isinstance(f, Or):
        result = False
        for a in f.args:
            result = naive_eval(a, sorts, params, env, group) or result
        return result
    if isinstance(f, (Exists, Forall)):
        (var, sort), rest = f.binders[0], f.binders[1:]
        body = type(f)(rest, f.body) if rest else f.body
        outcomes = []
        for value in sorts[sort]:
            inner = dict(env)
            inner[var] = value
            outcomes.append(naive_eval(body, sorts, params, inner, group))
        return any(outcomes) if isinstance(f, Exists) else all(outcomes)
    raise TypeError(f"not a formula: {f!r}")


# --- random generation --------------------------------------------------------

_NAME_CHARS = "abcdefghijklmnopqrstuvwxyz"


def random_name(rng: random.Random) -> str:
    while True:
        n = rng.choice(_NAME_CHARS) + "".join(
            rng.choice(_NAME_CHARS + "0123456789_") for _ in range(rng.randrange(3))
        )
        if n not in ("exists", "forall", "and", "or", "not", "in"):
            return n


def random_term(rng, depth, variables, params):
    if depth <= 0 or rng.random() < 0.3:
        choices = []
        if variables:
            choices.append("var")
        if params:
            choices.append("param")
        choices.append("one")
        kind = rng.choice(choices)
        if kind == "var":
            return Var(rng.choice(variables))
        if kind == "param":
            return Param(rng.choice(params))
        return One()
    kind = rng.choice(("product", "inverse", "conj"))
    if kind == "product":
        return Product(random_term(rng, depth - 1, variables, params), random_term(rng, depth - 1, variables, params))
    if kind == "inverse":
        return Inverse(random_term(rng, depth - 1, variables, params))
    return Conj(random_term(rng, depth - 1, variables, params), random_term(rng, depth - 1, variables, params))


def random_formula(rng, depth, variables, params, sorts, *, term_depth=2):
    """A random formula whose free variables lie in ``variables``."""
    variables = list(variables)
    if depth <= 0 or rng.random() < 0.25:
        if sorts and rng.random() < 0.25:
            return InSort(random_term(rng, term_depth, variables, params), rng.choice(sorts))
        return Eq(random_term(rng, term_depth, variables, params), random_term(rng, term_depth, variables, params))
    kind = rng.choice(("not", "and", "or", "exists", "forall"))
    if kind == "not":
        return Not(random_formula(rng, depth - 1, variables, params, sorts, term_depth=term_depth))
    if kind in ("and", "or"):
        args = tuple(
            random_formula(rng, depth - 1, variables, params, sorts, term_depth=term_depth)
            for _ in range(rng.randint(2, 3))
        )
        return And(args) if kind == "and" else Or(args)
    if not sorts:
        return Not(random_formula(rng, depth - 1, variables, params, sorts, term_depth=term_depth))
    count = rng.randint(1, 2)
    binders = []
    for _ in range(count):
        name = random_name(rng)
        binders.append((name, rng.choice(sorts)))
    inner_vars = variables + [b[0] for b in binders]
    body = random_formula(rng, depth - 1, inner_vars, params, sorts, term_depth=term_depth)
    q = Exists if kind == "exists" else Forall
    return q(tuple(binders), body)

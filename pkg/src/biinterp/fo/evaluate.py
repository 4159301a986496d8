"""Evaluation of formulas over finite carriers of group elements.

Formulas are compiled once into nested closures; quantifiers enumerate their
sort carriers in the given order, so witnesses are reproducible.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Sequence

from biinterp.errors import VerifierError
from biinterp.fo.syntax import (
    And,
    Conj,
    Eq,
    Exists,
    Forall,
    Formula,
    InSort,
    Inverse,
    Not,
    One,
    Or,
    Param,
    Product,
    Term,
    Var,
    free_vars,
    params as formula_params,
    sort_names,
    term_vars,
)

SortEnv = Mapping[str, Sequence]
ParamEnv = Mapping[str, object]


class BindingError(VerifierError):
    """A variable, parameter or sort name has no binding."""


def _infer_group(*envs):
    for env in envs:
        if not env:
            continue
        for value in env.values():
            if isinstance(value, (list, tuple)):
                if value:
                    return value[0].group
            elif hasattr(value, "group"):
                return value.group
    return None


def check_bindings(f: Formula, sorts: SortEnv, params: ParamEnv, free: Mapping) -> None:
    missing_vars = free_vars(f) - set(free)
    if missing_vars:
        raise BindingError(f"unbound variable(s): {', '.join(sorted(missing_vars))}")
    missing_params = formula_params(f) - set(params)
    if missing_params:
        raise BindingError(f"unbound parameter(s): {', '.join(sorted(missing_params))}")
    missing_sorts = sort_names(f) - set(sorts)
    if missing_sorts:
        raise BindingError(f"unknown sort(s): {', '.join(sorted(missing_sorts))}")


class _Compiler:
    def __init__(self, sorts: SortEnv, params: ParamEnv, group):
        self.sorts = {k: list(v) for k, v in sorts.items()}
        self.sort_sets = {k: set(v) for k, v in self.sorts.items()}
        self.params = params
        self.group = group

    def term(self, t: Term) -> Callable[[dict], object]:
        if isinstance(t, Var):
            name = t.name
            return lambda env: env[name]
        if isinstance(t, Param):
            value = self.params[t.name]
            return lambda env: value
        if isinstance(t, One):
            if self.group is None:
                raise BindingError("cannot evaluate '1' without a group")
            ident = self.group.identity
            return lambda env: ident
        if isinstance(t, Product):
            l, r = self.term(t.left), self.term(t.right)
            return lambda env: l(env) * r(env)
        if isinstance(t, Inverse):
            a = self.term(t.t)
            return lambda env: a(env).inv()
        b, x = self.term(t.base), self.term(t.by)
        return lambda env: b(env) ^ x(env)

    def formula(self, f: Formula) -> Callable[[dict], bool]:
        if isinstance(f, Eq):
            l, r = self.term(f.left), self.term(f.right)
            return lambda env: l(env) == r(env)
        if isinstance(f, InSort):
            a = self.term(f.t)
            members = self.sort_sets[f.sort]
            return lambda env: a(env) in members
        if isinstance(f, Not):
            a = self.formula(f.f)
            return lambda env: not a(env)
        if isinstance(f, And):
            parts = [self.formula(a) for a in f.args]
            return lambda env: all(p(env) for p in parts)
        if isinstance(f, Or):
            parts = [self.formula(a) for a in f.args]
            return lambda env: any(p(env) for p in parts)
        body = self.formula(f.body)
        names = [v for v, _ in f.binders]
        carriers = [self.sorts[s] for _, s in f.binders]
        want = isinstance(f, Exists)

        def quantified(env):
            inner = dict(env)
            for values in itertools.product(*carriers):
                inner.update(zip(names, values))
                if body(inner) == want:
                    return want
            return not want

        return quantified


def eval_formula(f: Formula, sorts: SortEnv, params: ParamEnv, free: Mapping | None = None, *, group=None) -> bool:
    """Truth of ``f`` under the given carriers, parameters and free values.

    Raises:
        BindingError: on unbound variables, parameters or sorts.
    """
    free = dict(free or {})
    check_bindings(f, sorts, params, free)
    group = group or _infer_group(params, free, sorts)
    return _Compiler(sorts, params, group).formula(f)(free)


# ``eval`` is the name used in the contract; keep the builtin unshadowed inside.
eval = eval_formula  # noqa: A001


def _existential_prefix(f: Formula):
    binders = []
    while isinstance(f, Exists):
        binders.extend(f.binders)
        f = f.body
    return binders, f


def _image_plan(f: Formula, var: str):
    """Split an existential formula into (binders, defining term, filters)."""
    binders, body = _existential_prefix(f)
    if not binders:
        return None
    bound = {v for v, _ in binders}
    if var in bound or len(bound) != len(binders):
        return None
    conjuncts = list(body.args) if isinstance(body, And) else [body]
    for k, c in enumerate(conjuncts):
        if not isinstance(c, Eq):
            continue
        for lhs, rhs in ((c.left, c.right), (c.right, c.left)):
            if lhs == Var(var) and var not in term_vars(rhs):
                rest = conjuncts[:k] + conjuncts[k + 1:]
                return binders, rhs, rest
    return None


def define_set(
    f: Formula,
    var: str,
    candidates: Iterable | None,
    sorts: SortEnv,
    params: ParamEnv,
    *,
    strategy: str = "auto",
    group=None,
) -> set:
    """``{g in candidates : f(g)}``.

    ``strategy="image"`` (chosen automatically when ``f`` is an existential
    prefix over ``var = t(bound vars)`` plus optional side conditions)
    enumerates the bound tuples forward and collects the values of ``t``;
    ``"filter"`` evaluates ``f`` at every candidate.  ``candidates=None`` means
    no restriction and needs the image strategy.
    """
    extra = free_vars(f) - {var}
    if extra:
        raise BindingError(f"formula has free variables besides {var!r}: {sorted(extra)}")
    check_bindings(f, sorts, params, {var: None})
    plan = _image_plan(f, var) if strategy in ("auto", "image") else None
    if strategy == "image" and plan is None:
        raise ValueError("formula is not an existential equation in the defined variable")
    cand_list = None if candidates is None else list(candidates)
    group = group or _infer_group(params, sorts, {"c": cand_list or []})
    comp = _Compiler(sorts, params, group)
    if plan is not None:
        binders, t, rest = plan
        names = [v for v, _ in binders]
        carriers = [comp.sorts[s] for _, s in binders]
        value = comp.term(t)
        checks = [comp.formula(c) for c in rest]
        out = set()
        env = {}
        for values in itertools.product(*carriers):
            env.update(zip(names, values))
            g = value(env)
            if checks:
                env[var] = g
                ok = all(c(env) for c in checks)
                del env[var]
                if not ok:
                    continue
            out.add(g)
        if cand_list is not None:
            out &= set(cand_list)
        return out
    if cand_list is None:
        raise ValueError("the filter strategy needs explicit candidates")
    test = comp.formula(f)
    return {g for g in cand_list if test({var: g})}


def find_witness(f: Formula, sorts: SortEnv, params: ParamEnv, free: Mapping | None = None, *, group=None):
    """First assignment to the leading existential binders making the body true.

    Returns ``None`` if there is none.
    """
    if not isinstance(f, Exists):
        raise ValueError("find_witness needs an existential formula")
    free = dict(free or {})
    check_bindings(f, sorts, params, free)
    group = group or _infer_group(params, free, sorts)
    binders, body = _existential_prefix(f)
    comp = _Compiler(sorts, params, group)
    test = comp.formula(body)
    names = [v for v, _ in binders]
    carriers = [comp.sorts[s] for _, s in binders]
    env = dict(free)
    for values in itertools.product(*carriers):
        env.update(zip(names, values))
        if test(env):
            return dict(zip(names, values))
    return None

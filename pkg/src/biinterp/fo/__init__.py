"""Sorted first-order logic over group elements: syntax, parsing, evaluation."""

from biinterp.fo.evaluate import BindingError, define_set, eval_formula, find_witness
from biinterp.fo.parser import ParseError, parse, parse_term
from biinterp.fo.reference import naive_eval, random_formula
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
)

__all__ = [
    "And", "BindingError", "Conj", "Eq", "Exists", "Forall", "Formula", "InSort",
    "Inverse", "Not", "One", "Or", "Param", "ParseError", "Product", "Term", "Var",
    "define_set", "eval_formula", "find_witness", "free_vars", "naive_eval", "parse",
    "parse_term", "random_formula",
]

"""Constructive synthesis of a realizing formula for any table that
respects the delta-class pairing.

For a fixed argument tuple alpha with table value delta, the selector

    C_alpha(p1, ..., pn) = ([](p1 <-> a1) & ... & [](pn <-> an)) & d

(constants a_i for alpha_i and d for delta) evaluates to d when every
p_i = alpha_i, to s & d when all inputs stay in their delta classes but
some differ, and to 0 once any input leaves its class.  Joining the
selectors of all 4**n argument tuples therefore reproduces the table
exactly, because d | 0 | (s & d') = d whenever d' shares d's class.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .algebra import Connective, Element
from .formula import Binary, Const, Formula, Var, box_formula, iff_formula, truth_table
from .preservation import find_violation, delta_pairing_relation
from .tables import FuncTable, points


class NotRepresentable(ValueError):
    """The table maps some same-class inputs to different classes, so no
    formula realizes it."""


@dataclass(frozen=True)
class AlphaSelector:
    """One argument tuple together with the table value it must produce."""

    alpha: tuple[Element, ...]
    delta: Element


def c_alpha(sel: AlphaSelector, var_names: list[str] | tuple[str, ...]) -> Formula:
    """The selector conjunction for one argument tuple."""
    if len(var_names) != len(sel.alpha):
        raise ValueError(
            f"{len(sel.alpha)} argument value(s) but {len(var_names)} variable(s)"
        )
    if not sel.alpha:
        raise ValueError("selector needs at least one argument position")
    conj: Formula | None = None
    for name, a in zip(var_names, sel.alpha):
        clause = box_formula(iff_formula(Var(name), Const(a)))
        conj = clause if conj is None else Binary(Connective.AND, conj, clause)
    return Binary(Connective.AND, conj, Const(sel.delta))


def default_var_names(arity: int) -> tuple[str, ...]:
    return tuple(f"p{i + 1}" for i in range(arity))


def synthesize(
    f: FuncTable,
    var_names: list[str] | tuple[str, ...] | None = None,
    simplify: bool = False,
) -> Formula:
    """A formula whose truth table is exactly f.

    The result is the join of one selector per argument tuple, tuples in
    enumeration order, so output is deterministic.  With simplify=True the
    selectors contributing a bare 0 are dropped (and the table equality is
    re-checked).  Tables of arity 0 are rejected: use a constant formula.
    Tables breaking the delta pairing raise NotRepresentable.
    """
    if f.arity == 0:
        raise ValueError("arity-0 table: use a constant formula directly")
    witness = find_violation(f, delta_pairing_relation())
    if witness is not None:
        raise NotRepresentable(
            f"table maps same-class inputs {witness.selected_columns} to "
            f"distinct classes {witness.image}"
        )
    names = tuple(var_names) if var_names is not None else default_var_names(f.arity)
    if len(names) != f.arity:
        raise ValueError(f"need {f.arity} variable name(s), got {len(names)}")
    selectors = [
        AlphaSelector(pt, f.entries[k]) for k, pt in enumerate(points(f.arity))
    ]
    if simplify:
        kept = [s for s in selectors if s.delta is not Element.ZERO]
        result = _join_all(kept, names) if kept else Const(Element.ZERO)
        if truth_table(result, names) != f:
            raise RuntimeError("simplification changed the realized table")
        return result
    return _join_all(selectors, names)


def _join_all(selectors, names) -> Formula:
    return functools.reduce(
        lambda acc, s: Binary(Connective.OR, acc, c_alpha(s, names)),
        selectors[1:],
        c_alpha(selectors[0], names),
    )

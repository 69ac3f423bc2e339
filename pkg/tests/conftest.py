"""Shared test helpers: seeded RNGs, random formula trees, system builders."""

from __future__ import annotations

import os
import random

from magari4.algebra import ELEMENTS, Connective, Element
from magari4.formula import Binary, Const, Formula, Unary, Var
from magari4.selftest import CANNED_FORMULAS

SEED = int(os.environ.get("MAGARI4_SEED", "1789"))

BINARY_OPS = (Connective.AND, Connective.OR, Connective.IMP)
UNARY_OPS = (Connective.NOT, Connective.DELTA)


def make_rng(offset: int = 0) -> random.Random:
    return random.Random(SEED + offset)


def random_formula(rng: random.Random, variables: tuple[str, ...], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        if variables and rng.random() < 0.8:
            return Var(rng.choice(variables))
        return Const(rng.choice(ELEMENTS))
    if rng.random() < 0.4:
        return Unary(rng.choice(UNARY_OPS), random_formula(rng, variables, depth - 1))
    return Binary(
        rng.choice(BINARY_OPS),
        random_formula(rng, variables, depth - 1),
        random_formula(rng, variables, depth - 1),
    )


def all_valuations(names: tuple[str, ...]):
    import itertools

    for values in itertools.product(ELEMENTS, repeat=len(names)):
        yield dict(zip(names, values))


def canned_with(**overrides: str) -> dict[int, str]:
    """The canned twelve formulas with e.g. F2='~ # p' overrides."""
    formulas = dict(CANNED_FORMULAS)
    for key, text in overrides.items():
        assert key.startswith("F")
        formulas[int(key[1:])] = text
    return formulas


def elem(token: str) -> Element:
    return Element.from_token(token)

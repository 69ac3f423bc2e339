"""Extensional n-ary operations on the four-element carrier.

A table lists all 4**n values in a fixed row-major enumeration: argument
tuples run through (0, r, s, 1) per position with the first argument most
significant.  The text format is `<arity>:<entries>` with entries a string
over {0, r, s, 1}, e.g. the delta operation is `1:ss11`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .algebra import ELEMENTS, Element


def points(arity: int) -> Iterator[tuple[Element, ...]]:
    """All argument tuples of the given arity, in enumeration order."""
    return itertools.product(ELEMENTS, repeat=arity)


def linear_index(args: Sequence[Element]) -> int:
    idx = 0
    for a in args:
        idx = idx * 4 + int(a)
    return idx


@dataclass(frozen=True)
class FuncTable:
    arity: int
    entries: tuple[Element, ...]

    def __post_init__(self) -> None:
        if self.arity < 0:
            raise ValueError("arity must be >= 0")
        if len(self.entries) != 4**self.arity:
            raise ValueError(
                f"arity {self.arity} needs {4 ** self.arity} entries, "
                f"got {len(self.entries)}"
            )

    def apply(self, args: Sequence[Element]) -> Element:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} argument(s), got {len(args)}")
        return self.entries[linear_index(args)]

    def __getitem__(self, args: Sequence[Element]) -> Element:
        return self.apply(args)

    def to_text(self) -> str:
        return f"{self.arity}:{''.join(e.token for e in self.entries)}"

    @classmethod
    def from_text(cls, text: str) -> "FuncTable":
        head, sep, body = text.partition(":")
        if not sep:
            raise ValueError(f"table text must look like '<arity>:<entries>': {text!r}")
        try:
            arity = int(head)
        except ValueError:
            raise ValueError(f"bad table arity: {head!r}") from None
        entries = []
        for ch in body:
            if ch not in "0rs1":
                raise ValueError(f"bad table entry character: {ch!r}")
            entries.append(Element.from_token(ch))
        return cls(arity, tuple(entries))

    @classmethod
    def from_function(cls, arity: int, fn: Callable[..., Element]) -> "FuncTable":
        return cls(arity, tuple(fn(*pt) for pt in points(arity)))

    def __str__(self) -> str:
        return self.to_text()


def constant_table(value: Element, arity: int = 1) -> FuncTable:
    return FuncTable(arity, (value,) * (4**arity))


def projection(arity: int, index: int) -> FuncTable:
    """The arity-ary table returning its index-th argument (0-based)."""
    if not 0 <= index < arity:
        raise ValueError(f"projection index {index} out of range for arity {arity}")
    return FuncTable(arity, tuple(pt[index] for pt in points(arity)))


def compose(g: FuncTable, args: Sequence[FuncTable]) -> FuncTable:
    """Top-composition g(t1, ..., tn) of tables of a common arity.

    g has arity n; every t_i has the same arity k; the result is k-ary.
    """
    if len(args) != g.arity:
        raise ValueError(f"{g.arity}-ary table composed with {len(args)} argument(s)")
    if not args:
        return g
    k = args[0].arity
    if any(t.arity != k for t in args):
        raise ValueError("composition arguments must share one arity")
    entries = tuple(
        g.entries[linear_index([t.entries[j] for t in args])] for j in range(4**k)
    )
    return FuncTable(k, entries)

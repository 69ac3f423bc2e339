"""Brute-force expressibility oracle: the k-ary fragment of the clone
generated by a system of tables.

Starting from the k projections, the fragment is closed under top
composition with the system's members until it stabilizes.  Because
equivalence over the four-element algebra is table equality, term identity
plays no role: the fixpoint is exactly the set of k-ary operations the
system can express with variables available (and no constants assumed).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .algebra import ELEMENTS, Element
from .tables import FuncTable, constant_table, projection


@dataclass(frozen=True)
class SystemSigma:
    members: tuple[tuple[str, FuncTable], ...]

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.members]
        if len(set(labels)) != len(labels):
            raise ValueError("member labels must be unique")
        for label, table in self.members:
            if table.arity < 1:
                raise ValueError(f"member {label!r} must have arity >= 1")

    @classmethod
    def of(cls, tables: Iterable[FuncTable | tuple[str, FuncTable]]) -> "SystemSigma":
        members = []
        for idx, item in enumerate(tables):
            if isinstance(item, FuncTable):
                members.append((f"g{idx + 1}", item))
            else:
                members.append(item)
        return cls(tuple(members))


@dataclass(frozen=True)
class ClosureFragment:
    k: int
    tables: frozenset[FuncTable]

    def __contains__(self, table: FuncTable) -> bool:
        return table in self.tables

    def __len__(self) -> int:
        return len(self.tables)


def _pack(t: FuncTable) -> int:
    packed = 0
    for k, e in enumerate(t.entries):
        packed |= int(e) << (2 * k)
    return packed


def _unpack(packed: int, k: int) -> FuncTable:
    return FuncTable(
        k, tuple(Element((packed >> (2 * j)) & 3) for j in range(4**k))
    )


def _compose_packed(flat: list[int], combo: tuple[int, ...], size: int) -> int:
    out = 0
    for j in range(size):
        shift = 2 * j
        idx = 0
        for t in combo:
            idx = idx * 4 + ((t >> shift) & 3)
        out |= flat[idx] << shift
    return out


def closure_fragment(sigma: SystemSigma, k: int) -> ClosureFragment:
    """Least set of k-ary tables containing the projections and closed under
    top composition with sigma's members.  k must lie in 1..3."""
    if not 1 <= k <= 3:
        raise ValueError(f"fragment arity must lie in 1..3, got {k}")
    size = 4**k
    flats = [(t.arity, [int(e) for e in t.entries]) for _, t in sigma.members]
    current: set[int] = {_pack(projection(k, i)) for i in range(k)}
    frontier = sorted(current)
    while frontier:
        old = sorted(current.difference(frontier))
        new: set[int] = set()
        for arity, flat in flats:
            # every argument tuple touching the frontier, enumerated once
            for pattern in itertools.product((False, True), repeat=arity):
                if not any(pattern):
                    continue
                pools = [frontier if is_new else old for is_new in pattern]
                for combo in itertools.product(*pools):
                    h = _compose_packed(flat, combo, size)
                    if h not in current:
                        new.add(h)
        current |= new
        frontier = sorted(new)
    return ClosureFragment(k, frozenset(_unpack(p, k) for p in current))


def expressible_constants(sigma: SystemSigma) -> frozenset[Element]:
    """The constants whose one-variable constant table the system expresses."""
    fragment = closure_fragment(sigma, 1)
    return frozenset(
        c for c in ELEMENTS if constant_table(c, 1) in fragment.tables
    )


def contains(sigma: SystemSigma, target: FuncTable) -> bool:
    """Membership of target in the fragment of its own arity (arity <= 3)."""
    if not 1 <= target.arity <= 3:
        raise ValueError(f"target arity must lie in 1..3, got {target.arity}")
    if any(target == projection(target.arity, i) for i in range(target.arity)):
        return True  # projections seed every fragment
    return target in closure_fragment(sigma, target.arity).tables

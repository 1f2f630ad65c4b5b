"""Arc-annotated diagrams: arcs, stacks, validated structures and the core map.

Positions are 1-based throughout. A :class:`Structure` is immutable; build
validated instances with :func:`new_structure`.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import (
    ArcNotInStructure,
    ArcTooShort,
    CrossingBoundExceeded,
    DegreeViolation,
    FormatError,
    PositionOutOfRange,
    StackTooShort,
)


class Arc(NamedTuple):
    i: int
    j: int

    @property
    def length(self) -> int:
        return self.j - self.i


class Stack(NamedTuple):
    """Run of parallel arcs ``(i, j), (i+1, j-1), ...`` keyed by its outermost arc."""

    i: int
    j: int
    length: int

    @property
    def innermost(self) -> Arc:
        return Arc(self.i + self.length - 1, self.j - self.length + 1)

    @property
    def outermost(self) -> Arc:
        return Arc(self.i, self.j)

    def arcs(self) -> list[Arc]:
        return [Arc(self.i + t, self.j - t) for t in range(self.length)]

    def positions(self) -> list[int]:
        left = range(self.i, self.i + self.length)
        right = range(self.j - self.length + 1, self.j + 1)
        return [*left, *right]


def crosses(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] < b[0] < a[1] < b[1] or b[0] < a[0] < b[1] < a[1]


def precedes(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """True iff ``a`` is strictly nested inside ``b``."""
    return b[0] < a[0] and a[1] < b[1]


def max_crossing(arcs: Iterable[tuple[int, int]]) -> int:
    """Size of the largest set of mutually crossing arcs.

    Mutually crossing arcs all span a common gap and have their endpoints in
    the same relative order, so per gap this is a longest increasing
    subsequence of right endpoints ordered by left endpoint.
    """
    arcs = sorted(arcs)
    if not arcs:
        return 0
    best = 1
    cuts = sorted({a[0] for a in arcs})
    for x in cuts:
        spanning = [a[1] for a in arcs if a[0] <= x < a[1]]
        tails: list[int] = []
        for j in spanning:
            pos = bisect_left(tails, j)
            if pos == len(tails):
                tails.append(j)
            else:
                tails[pos] = j
        best = max(best, len(tails))
    return best


def stacks_of(arcs: Iterable[tuple[int, int]]) -> list[Stack]:
    """Partition arcs into maximal stacks, ordered by left endpoint."""
    arcset = set(map(tuple, arcs))
    out = []
    for i, j in sorted(arcset):
        if (i - 1, j + 1) in arcset:
            continue
        length = 1
        while (i + length, j - length) in arcset:
            length += 1
        out.append(Stack(i, j, length))
    return out


@dataclass(frozen=True)
class Structure:
    n: int
    arcs: tuple[Arc, ...]
    k: int = 3
    lam: int = 4
    sigma: int = 3

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(sorted(Arc(*a) for a in self.arcs)))

    @cached_property
    def partner(self) -> list[int]:
        """``partner[p]`` is the position paired with ``p`` or 0; index 0 unused."""
        table = [0] * (self.n + 2)
        for i, j in self.arcs:
            table[i] = j
            table[j] = i
        return table

    @cached_property
    def arcset(self) -> frozenset:
        return frozenset(self.arcs)

    @cached_property
    def stacks(self) -> list[Stack]:
        return stacks_of(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def with_arcs(self, arcs) -> "Structure":
        return Structure(self.n, tuple(arcs), self.k, self.lam, self.sigma)

    def unpaired(self) -> list[int]:
        return [p for p in range(1, self.n + 1) if not self.partner[p]]


@dataclass(frozen=True)
class Core:
    """Core diagram plus ``positions[c-1]`` = original position of core vertex ``c``."""

    structure: Structure
    positions: tuple[int, ...] = field(default=())

    def original(self, c: int) -> int:
        return self.positions[c - 1]


def new_structure(n: int, arcs: Iterable[tuple[int, int]] = (), k: int = 3, lam: int = 4,
                  sigma: int = 3) -> Structure:
    """Validate and build a structure.

    Checks run in a fixed order (degree, arc length, stack length, crossing)
    so the reported violation is deterministic.
    """
    arcs = sorted(Arc(*sorted(a)) for a in arcs)
    for a in arcs:
        if a.i < 1 or a.j > n or a.i == a.j:
            raise PositionOutOfRange(f"arc {tuple(a)} outside 1..{n}", [a])
    seen: dict[int, Arc] = {}
    for a in arcs:
        for p in a:
            if p in seen:
                raise DegreeViolation(f"position {p} used by {tuple(seen[p])} and {tuple(a)}",
                                      [seen[p], a])
            seen[p] = a
    for a in arcs:
        if a.length < lam:
            raise ArcTooShort(f"arc {tuple(a)} has length {a.length} < {lam}", [a])
    for st in stacks_of(arcs):
        if st.length < sigma:
            raise StackTooShort(f"stack {tuple(st)} has length {st.length} < {sigma}",
                                st.arcs())
    if arcs and max_crossing(arcs) >= k:
        raise CrossingBoundExceeded(f"{k} mutually crossing arcs present", _crossing_witness(arcs, k))
    return Structure(n, tuple(arcs), k, lam, sigma)


def _crossing_witness(arcs: list[Arc], k: int) -> list[Arc]:
    def extend(chosen, rest):
        if len(chosen) == k:
            return chosen
        for idx, a in enumerate(rest):
            if all(crosses(a, b) for b in chosen):
                found = extend(chosen + [a], rest[idx + 1:])
                if found:
                    return found
        return None

    return extend([], arcs) or []


def maximal_stacks(s: Structure) -> list[Stack]:
    return list(s.stacks)


def crossing_set(s: Structure, a: tuple[int, int]) -> set[Arc]:
    a = Arc(*a)
    if a not in s.arcset:
        raise ArcNotInStructure(f"{tuple(a)} is not an arc of the structure")
    return {b for b in s.arcs if crosses(a, b)}


def core(s: Structure) -> Core:
    """Collapse every maximal stack to its outermost arc and relabel 1..m."""
    drop = set()
    for st in s.stacks:
        for t in range(1, st.length):
            drop.add(st.i + t)
            drop.add(st.j - t)
    kept = [p for p in range(1, s.n + 1) if p not in drop]
    relabel = {p: c for c, p in enumerate(kept, start=1)}
    arcs = [Arc(relabel[st.i], relabel[st.j]) for st in s.stacks]
    return Core(Structure(len(kept), tuple(arcs), s.k, 1, 1), tuple(kept))


# -- arc-list text format ---------------------------------------------------

def format_arc_list(s: Structure) -> str:
    lines = [f"n {s.n}"] + [f"{i} {j}" for i, j in s.arcs]
    return "\n".join(lines) + "\n"


def parse_arc_list(text: str, k: int = 3, lam: int = 4, sigma: int = 3) -> Structure:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise FormatError("arc list must start with a 'n <length>' header")
    try:
        n = int(lines[0].split()[1])
        arcs = []
        for ln in lines[1:]:
            i, j = ln.split()
            arcs.append((int(i), int(j)))
    except ValueError as exc:
        raise FormatError(f"malformed arc list: {exc}") from None
    return new_structure(n, arcs, k, lam, sigma)


BRACKETS = ("()", "[]", "{}")


def to_bracket(s: Structure, families: tuple[str, ...] = BRACKETS) -> str:
    """Dot-bracket string, giving each arc the first family it does not cross in."""
    pages: list[list[Arc]] = [[] for _ in families]
    chars = ["."] * s.n
    for a in s.arcs:
        for idx, page in enumerate(pages):
            if not any(crosses(a, b) for b in page):
                page.append(a)
                chars[a.i - 1], chars[a.j - 1] = families[idx]
                break
        else:
            raise FormatError(f"arc {tuple(a)} needs more than {len(families)} bracket families")
    return "".join(chars)


def parse_bracket(text: str, k: int = 3, lam: int = 4, sigma: int = 3,
                  families: tuple[str, ...] = BRACKETS) -> Structure:
    opens = {f[0]: f for f in families}
    closes = {f[1]: f for f in families}
    pending: dict[str, list[int]] = {f: [] for f in families}
    arcs = []
    for p, ch in enumerate(text.strip(), start=1):
        if ch in opens:
            pending[opens[ch]].append(p)
        elif ch in closes:
            if not pending[closes[ch]]:
                raise FormatError(f"unmatched {ch!r} at {p}")
            arcs.append((pending[closes[ch]].pop(), p))
        elif ch != ".":
            raise FormatError(f"unexpected {ch!r} at {p}")
    if any(pending.values()):
        raise FormatError("unclosed brackets")
    return new_structure(len(text.strip()), arcs, k, lam, sigma)

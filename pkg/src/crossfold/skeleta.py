"""Skeleta: irreducible shadows and the stack-insertion grammar that grows them.

A skeleton lives on a segment relabelled ``1..span`` with both ends paired and
every stack crossed by another. Trees are grown from an irreducible shadow
(a skeleton without nesting) by inserting one stack at a time behind a
moving frontier ``r``; each skeleton containing the shadow is reached once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .diagrams import Stack, Structure, crosses, max_crossing, precedes
from .errors import (
    AdjacentStackMerge,
    ArcTooShort,
    CrossingBoundExceeded,
    FrontierViolation,
    InvalidParams,
    LimitExceeded,
    NotASkeleton,
    NotMinimal,
    PositionsOccupied,
    StackTooShort,
)


@dataclass(frozen=True)
class Skeleton:
    span: int
    stacks: tuple[Stack, ...]
    k: int = 3
    lam: int = 4
    sigma: int = 3

    def __post_init__(self):
        object.__setattr__(self, "stacks", tuple(sorted(Stack(*s) for s in self.stacks)))

    @cached_property
    def structure(self) -> Structure:
        return Structure(self.span, tuple(a for st in self.stacks for a in st.arcs()),
                         self.k, self.lam, self.sigma)

    @cached_property
    def paired(self) -> frozenset:
        return frozenset(p for st in self.stacks for p in st.positions())

    @property
    def arcs(self):
        return self.structure.arcs

    def intervals(self) -> list[tuple[int, int]]:
        """Maximal runs of unpaired positions, left to right."""
        out = []
        start = None
        for p in range(1, self.span + 2):
            if p <= self.span and p not in self.paired:
                if start is None:
                    start = p
            elif start is not None:
                out.append((start, p - 1))
                start = None
        return out

    def shifted(self, offset: int) -> list[Stack]:
        return [Stack(st.i + offset, st.j + offset, st.length) for st in self.stacks]


IrreducibleShadow = Skeleton


@dataclass(frozen=True)
class RootedSkeleton:
    skeleton: Skeleton
    r: int = 0


def is_skeleton_stacks(stacks, span: int) -> bool:
    """Ends paired, every stack crossed, stacks crossing-connected."""
    if len(stacks) < 2:
        return False
    if min(st.i for st in stacks) != 1 or max(st.j for st in stacks) != span:
        return False
    outer = [st.outermost for st in stacks]
    seen = {0}
    todo = [0]
    while todo:
        a = todo.pop()
        for b in range(len(outer)):
            if b not in seen and crosses(outer[a], outer[b]):
                seen.add(b)
                todo.append(b)
    return len(seen) == len(outer)


def enumerate_irreducible_shadows(span: int, sigma: int = 3, max_stacks: int | None = 3,
                                  k: int = 3, lam: int = 4) -> list[Skeleton]:
    """All nesting-free skeleta over ``1..span`` with at most ``max_stacks`` stacks."""
    if max_stacks is not None and max_stacks < 2:
        raise InvalidParams("an irreducible shadow needs at least two stacks")
    if sigma < 1:
        raise InvalidParams("sigma must be positive")
    cap = span if max_stacks is None else max_stacks
    used = [False] * (span + 2)
    chosen: list[Stack] = []
    out: list[Skeleton] = []

    def ok(p, q):
        for st in chosen:
            if st.j > q:  # the new stack would sit inside st
                return False
        bad = [st.outermost for st in chosen if crosses((p, q), st.outermost)]
        return len(bad) < k - 1 or max_crossing(bad) < k - 1

    def walk(p):
        while p <= span and used[p]:
            p += 1
        if p > span:
            if chosen and max(st.j for st in chosen) == span and is_skeleton_stacks(chosen, span):
                out.append(Skeleton(span, tuple(chosen), k, lam, sigma))
            return
        if p > 1 and not (chosen and max(st.j for st in chosen) > p):
            return  # nothing open: the stacks would not be connected
        if p > 1:
            walk(p + 1)
        if len(chosen) == cap:
            return
        for q in range(p + 2 * sigma - 2 + lam, span + 1):
            if used[q] or not ok(p, q):
                continue
            length = 0
            while True:
                i, j = p + length, q - length
                if j - i < lam or used[i] or used[j]:
                    break
                length += 1
                if length >= sigma:
                    st = Stack(p, q, length)
                    for x in st.positions():
                        used[x] = True
                    chosen.append(st)
                    walk(p + length)
                    chosen.pop()
                    for x in st.positions():
                        used[x] = False

    walk(1)
    out.sort(key=lambda s: s.stacks)
    return out


# -- insertion ----------------------------------------------------------------

def _check_insert(rs: RootedSkeleton, st: Stack):
    """Return ``(error class, message)`` for an illegal insertion, else ``None``."""
    sk = rs.skeleton
    i, j, length = st
    if i < rs.r:
        return FrontierViolation, f"stack starts at {i}, before frontier {rs.r}"
    if i < 1 or j > sk.span or i >= j:
        return PositionsOccupied, f"stack ({i},{j},{length}) leaves 1..{sk.span}"
    if any(p in sk.paired for p in st.positions()):
        return PositionsOccupied, f"stack ({i},{j},{length}) hits paired positions"
    if length < sk.sigma:
        return StackTooShort, f"stack length {length} < {sk.sigma}"
    inner = st.innermost
    if inner.length < sk.lam:
        return ArcTooShort, f"innermost arc {tuple(inner)} shorter than {sk.lam}"
    outer_set = {a for s in sk.stacks for a in (s.outermost, s.innermost)}
    if (i - 1, j + 1) in outer_set:
        return AdjacentStackMerge, f"({i - 1},{j + 1}) is already an arc"
    if any(precedes(s.outermost, inner) for s in sk.stacks):
        return NotMinimal, f"an arc is nested below {tuple(inner)}"
    bad = [s.outermost for s in sk.stacks if crosses(s.outermost, (i, j))]
    if len(bad) >= sk.k - 1 and max_crossing(bad) >= sk.k - 1:
        return CrossingBoundExceeded, f"stack ({i},{j},{length}) closes a {sk.k}-crossing"
    if not bad:
        return NotASkeleton, f"stack ({i},{j},{length}) crosses nothing"
    return None


def insert_stack(rs: RootedSkeleton, st: Stack) -> RootedSkeleton:
    st = Stack(*st)
    err = _check_insert(rs, st)
    if err is not None:
        cls, msg = err
        if issubclass(cls, (StackTooShort, ArcTooShort, CrossingBoundExceeded)):
            raise cls(msg, st.arcs())
        raise cls(msg)
    sk = rs.skeleton
    start = next(a for a, b in sk.intervals() if a <= st.i <= b)
    child = Skeleton(sk.span, sk.stacks + (st,), sk.k, sk.lam, sk.sigma)
    return RootedSkeleton(child, start - 1)


def insertion_candidates(rs: RootedSkeleton) -> list[Stack]:
    """Every stack whose insertion into ``rs`` is legal, sorted by ``(i, j, length)``."""
    sk = rs.skeleton
    free = [p not in sk.paired for p in range(sk.span + 2)]
    free[0] = free[-1] = False
    out = []
    for i in range(max(1, rs.r), sk.span + 1):
        length = 0
        while free[i + length] if i + length <= sk.span else False:
            length += 1
            if length < sk.sigma:
                continue
            for j in range(i + 2 * length - 2 + sk.lam, sk.span + 1):
                if all(free[j - t] for t in range(length)):
                    st = Stack(i, j, length)
                    if _check_insert(rs, st) is None:
                        out.append(st)
    out.sort()
    return out


@dataclass
class SkeletaTree:
    root: RootedSkeleton
    vertices: list[RootedSkeleton] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)
    label: list[Stack | None] = field(default_factory=list)
    depth: list[int] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    truncated: bool = False
    limit_error: LimitExceeded | None = None

    def __len__(self) -> int:
        return len(self.vertices)

    def skeleta(self) -> list[Skeleton]:
        return [v.skeleton for v in self.vertices]

    def dump(self) -> str:
        """One line per vertex, ``depth r arcs``, in depth-first order."""
        lines = []
        stack = [0]
        while stack:
            v = stack.pop()
            rs = self.vertices[v]
            arcs = " ".join(f"{i}-{j}" for i, j in rs.skeleton.arcs)
            lines.append(f"{self.depth[v]} {rs.r} {arcs}")
            stack.extend(reversed(self.children[v]))
        return "\n".join(lines) + "\n"


def build_skeleta_tree(s0: Skeleton, max_depth: int | None = None,
                       max_vertices: int | None = None) -> SkeletaTree:
    """Breadth-first closure of stack insertion from ``(s0, 0)``.

    Reaching a skeleton twice is a hard failure. Hitting a limit stops the
    expansion and flags the tree as truncated instead of raising.
    """
    root = RootedSkeleton(s0, 0)
    tree = SkeletaTree(root, [root], [-1], [None], [0], [[]])
    seen = {s0.stacks: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        if max_depth is not None and tree.depth[v] >= max_depth:
            if insertion_candidates(tree.vertices[v]):
                tree.truncated = True
                tree.limit_error = LimitExceeded(f"depth limit {max_depth} reached")
            continue
        for st in insertion_candidates(tree.vertices[v]):
            if max_vertices is not None and len(tree.vertices) >= max_vertices:
                tree.truncated = True
                tree.limit_error = LimitExceeded(f"vertex limit {max_vertices} reached")
                queue.clear()
                break
            child = insert_stack(tree.vertices[v], st)
            key = child.skeleton.stacks
            if key in seen:
                raise AssertionError(f"skeleton {key} generated twice")
            seen[key] = len(tree.vertices)
            tree.vertices.append(child)
            tree.parent.append(v)
            tree.label.append(st)
            tree.depth.append(tree.depth[v] + 1)
            tree.children.append([])
            tree.children[v].append(len(tree.vertices) - 1)
            queue.append(len(tree.vertices) - 1)
    return tree


@lru_cache(maxsize=None)
def skeleta_trees(span: int, sigma: int = 3, max_stacks: int | None = 3) -> tuple[SkeletaTree, ...]:
    """Trees for every irreducible shadow over ``span``; shared across folds."""
    return tuple(build_skeleta_tree(s0) for s0 in enumerate_irreducible_shadows(span, sigma, max_stacks))


def all_skeleta(span: int, sigma: int = 3, max_stacks: int | None = 3) -> list[Skeleton]:
    return [sk for tree in skeleta_trees(span, sigma, max_stacks) for sk in tree.skeleta()]

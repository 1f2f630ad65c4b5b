"""Shadow sequences and the loop decomposition of structures.

Arcs are coloured on the core: a crossing stack is red when its core arc is a
minimal crossing arc for some other arc, and those red stacks form the
pseudoknot loops. A non-red crossing stack closes an interior loop when exactly
one component stack sits directly beneath it with no other endpoints in
between, and a multi-loop otherwise. Noncrossing stacks close hairpin,
interior or multi-loops depending on what is nested under their innermost arc.
Unpaired vertices belong to the loop owning the gap they sit in; vertices
enclosed by no arc are exterior, and paired vertices take their arc's colour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagrams import Arc, Stack, Structure, crosses, precedes
from .errors import EmptyStructure

HAIRPIN, INTERIOR, MULTI, PSEUDOKNOT = "hairpin", "interior", "multi", "pseudoknot"
PURPLE, GREEN, BLUE, RED, BLACK = "purple", "green", "blue", "red", "black"
COLOR_OF = {HAIRPIN: PURPLE, INTERIOR: GREEN, MULTI: BLUE, PSEUDOKNOT: RED}


def _nested(a: Stack, b: Stack) -> bool:
    return precedes(a.outermost, b.innermost)


def crossing_components(stacks: list[Stack]) -> list[list[int]]:
    """Index groups of stacks connected by crossings; singletons are noncrossing."""
    parent = list(range(len(stacks)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(len(stacks)):
        for b in range(a + 1, len(stacks)):
            if crosses(stacks[a].outermost, stacks[b].outermost):
                parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(len(stacks)):
        groups.setdefault(find(a), []).append(a)
    return sorted(groups.values(), key=lambda g: stacks[g[0]].i)


@dataclass
class SkeletonLayout:
    """Loop structure of one crossing component, in terms of its own stacks.

    Gaps are ``(start, end)`` runs of positions between consecutive component
    endpoints (``start > end`` for an empty gap).
    """

    stacks: list[Stack]
    red: list[bool]
    pseudoknots: list[tuple[list[int], list[tuple[int, int]]]] = field(default_factory=list)
    interiors: list[tuple[int, int, tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    multis: list[tuple[int, list[int], list[tuple[int, int]]]] = field(default_factory=list)

    @property
    def span(self) -> tuple[int, int]:
        return min(s.i for s in self.stacks), max(s.j for s in self.stacks)


def skeleton_layout(stacks: list[Stack]) -> SkeletonLayout:
    stacks = sorted(stacks)
    m = len(stacks)
    cross = [[crosses(stacks[a].outermost, stacks[b].outermost) for b in range(m)] for a in range(m)]
    red = [False] * m
    for b in range(m):
        crossing_b = [a for a in range(m) if cross[a][b]]
        for a in crossing_b:
            if not any(_nested(stacks[c], stacks[a]) for c in crossing_b if c != a):
                red[a] = True

    positions = sorted(p for st in stacks for p in st.positions())
    gaps = [(positions[t] + 1, positions[t + 1] - 1) for t in range(len(positions) - 1)]

    def encloses(a, gap):
        inner = stacks[a].innermost
        return inner.i < gap[0] and gap[1] < inner.j

    owner: dict[tuple[int, int], tuple[str, int]] = {}
    for gap in gaps:
        around = [a for a in range(m) if encloses(a, gap)]
        inner = [a for a in around if not any(_nested(stacks[c], stacks[a]) for c in around if c != a)]
        if not inner:
            continue  # empty gap inside a stack run
        plain = [a for a in inner if not red[a]]
        if len(plain) > 1:
            raise AssertionError(f"gap {gap} has two non-red innermost arcs")
        owner[gap] = ("arc", plain[0]) if plain else ("red", inner[0])

    layout = SkeletonLayout(stacks, red)

    # pseudoknot loops: red stacks grouped by crossing
    parent = list(range(m))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a in range(m):
        for b in range(a + 1, m):
            if red[a] and red[b] and cross[a][b]:
                parent[find(a)] = find(b)
    pk_groups: dict[int, list[int]] = {}
    for a in range(m):
        if red[a]:
            pk_groups.setdefault(find(a), []).append(a)
    pk_gaps: dict[int, list[tuple[int, int]]] = {r: [] for r in pk_groups}
    arc_gaps: dict[int, list[tuple[int, int]]] = {}
    for gap, (how, a) in owner.items():
        if how == "red":
            pk_gaps[find(a)].append(gap)
        else:
            arc_gaps.setdefault(a, []).append(gap)
    for root in sorted(pk_groups, key=lambda r: min(pk_groups[r])):
        layout.pseudoknots.append((pk_groups[root], sorted(g for g in pk_gaps[root] if g[0] <= g[1])))

    for a in range(m):
        if red[a]:
            continue
        below = [c for c in range(m) if _nested(stacks[c], stacks[a])]
        tops = [c for c in below if not any(_nested(stacks[c], stacks[d]) for d in below if d != c)]
        inner = stacks[a].innermost
        own = sorted(arc_gaps.get(a, []))
        if len(tops) == 1:
            g = stacks[tops[0]]
            left, right = (inner.i + 1, g.i - 1), (g.j + 1, inner.j - 1)
            clean = not any(inner.i < q < g.i or g.j < q < inner.j for q in positions)
            if clean and all(owner.get(x, ("arc", a)) == ("arc", a) for x in (left, right)):
                layout.interiors.append((a, tops[0], left, right))
                continue
        layout.multis.append((a, tops, [g for g in own if g[0] <= g[1]]))
    return layout


@dataclass
class Loop:
    kind: str
    closing: list[Arc]
    intervals: list[tuple[int, int]] = field(default_factory=list)
    branches: list[tuple[int, int]] = field(default_factory=list)
    stacks: list[Stack] = field(default_factory=list)

    @property
    def unpaired(self) -> int:
        return sum(b - a + 1 for a, b in self.intervals)

    @property
    def start(self) -> int:
        return min(a.i for a in self.closing)


@dataclass
class LoopDecomposition:
    structure: Structure
    loops: list[Loop]
    arc_colors: dict[Arc, str]
    vertex_colors: dict[int, str]
    pk_stacks: set[Stack]
    exterior: list[tuple[int, int]]

    @property
    def exterior_unpaired(self) -> int:
        return sum(b - a + 1 for a, b in self.exterior)


def _add_run(runs: list[tuple[int, int]], p: int) -> None:
    if runs and runs[-1][1] == p - 1:
        runs[-1] = (runs[-1][0], p)
    else:
        runs.append((p, p))


def loop_decompose(s: Structure) -> LoopDecomposition:
    stacks = s.stacks
    comps = crossing_components(stacks)
    start_of: dict[int, tuple[str, object]] = {}
    for comp in comps:
        if len(comp) == 1:
            st = stacks[comp[0]]
            start_of[st.i] = ("stack", st)
        else:
            members = [stacks[c] for c in comp]
            start_of[min(x.i for x in members)] = ("component", members)

    loops: list[Loop] = []
    arc_colors: dict[Arc, str] = {}
    vertex_colors: dict[int, str] = {}
    pk_stacks: set[Stack] = set()
    exterior: list[tuple[int, int]] = []

    def color_stack(st: Stack, kind: str) -> None:
        for a in st.arcs():
            arc_colors[a] = COLOR_OF[kind]

    def region(u: int, v: int, runs: list, branches: list) -> None:
        p = u
        while p <= v:
            item = start_of.get(p)
            if item is None:
                _add_run(runs, p)
                p += 1
            elif item[0] == "stack":
                st = item[1]
                branches.append((st.i, st.j))
                secondary(st)
                p = st.j + 1
            else:
                members = item[1]
                hi = max(x.j for x in members)
                branches.append((p, hi))
                component(members)
                p = hi + 1

    def secondary(st: Stack) -> None:
        inner = st.innermost
        loop = Loop(HAIRPIN, [inner], stacks=[st])
        region(inner.i + 1, inner.j - 1, loop.intervals, loop.branches)
        if not loop.branches:
            loop.kind = HAIRPIN
        elif len(loop.branches) == 1 and start_of[loop.branches[0][0]][0] == "stack":
            loop.kind = INTERIOR
            loop.closing.append(Arc(*loop.branches[0]))
            loop.branches = []
        else:
            loop.kind = MULTI
        loops.append(loop)
        color_stack(st, loop.kind)

    def component(members: list[Stack]) -> None:
        lay = skeleton_layout(members)
        st = lay.stacks
        pk_stacks.update(st)
        for group, gaps in lay.pseudoknots:
            loop = Loop(PSEUDOKNOT, [st[g].outermost for g in group], stacks=[st[g] for g in group])
            for gap in gaps:
                region(gap[0], gap[1], loop.intervals, loop.branches)
            loops.append(loop)
            for g in group:
                color_stack(st[g], PSEUDOKNOT)
        for a, g, left, right in lay.interiors:
            loop = Loop(INTERIOR, [st[a].innermost, st[g].outermost], stacks=[st[a]])
            for gap in (left, right):
                if gap[0] <= gap[1]:
                    region(gap[0], gap[1], loop.intervals, loop.branches)
            if loop.branches:
                loop.kind = MULTI
            loops.append(loop)
            color_stack(st[a], loop.kind)
        for a, tops, gaps in lay.multis:
            loop = Loop(MULTI, [st[a].innermost] + [st[t].outermost for t in tops], stacks=[st[a]])
            for gap in gaps:
                region(gap[0], gap[1], loop.intervals, loop.branches)
            loops.append(loop)
            color_stack(st[a], MULTI)

    region(1, s.n, exterior, [])
    for loop in loops:
        loop.intervals.sort()
        for a, b in loop.intervals:
            for p in range(a, b + 1):
                vertex_colors[p] = COLOR_OF[loop.kind]
    for a, b in exterior:
        for p in range(a, b + 1):
            vertex_colors[p] = BLACK
    for arc, color in arc_colors.items():
        vertex_colors[arc.i] = vertex_colors[arc.j] = color
    loops.sort(key=lambda lp: (lp.start, lp.kind))
    return LoopDecomposition(s, loops, arc_colors, vertex_colors, pk_stacks, exterior)


def is_balanced(loop: Loop, s: Structure) -> bool:
    """True iff the pseudoknot's core arcs pair off into mutually minimal crossings."""
    arcs = [st.outermost for st in loop.stacks] if loop.stacks else list(loop.closing)
    all_core = [st.outermost for st in s.stacks]
    core_of = {st.outermost: st for st in s.stacks}

    def minimal_for(a, b):
        rivals = [c for c in all_core if crosses(c, b)]
        return crosses(a, b) and not any(
            c != a and _nested(core_of[c], core_of[a]) for c in rivals)

    def match(rest):
        if not rest:
            return True
        a = rest[0]
        for idx in range(1, len(rest)):
            b = rest[idx]
            if minimal_for(a, b) and minimal_for(b, a):
                if match(rest[1:idx] + rest[idx + 1:]):
                    return True
        return False

    return len(arcs) % 2 == 0 and match(arcs)


# -- shadows ------------------------------------------------------------------

def peel_shadow(s: Structure) -> tuple[Structure, Structure]:
    """Split off the stacks holding the nesting-maximal arcs.

    Both parts keep the original coordinates, so their arc sets partition the
    input directly.
    """
    if not s.arcs:
        raise EmptyStructure("cannot peel a shadow from an empty structure")
    stacks = s.stacks
    top = [st for st in stacks if not any(_nested(st, other) for other in stacks if other != st)]
    shadow_arcs = [a for st in top for a in st.arcs()]
    rest = [a for a in s.arcs if a not in set(shadow_arcs)]
    return s.with_arcs(shadow_arcs), s.with_arcs(rest)


def shadow_sequence(s: Structure) -> list[Structure]:
    out = []
    while s.arcs:
        shadow, s = peel_shadow(s)
        out.append(shadow)
    return out

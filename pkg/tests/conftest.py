from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from crossfold.diagrams import Stack, new_structure
from crossfold.errors import InvalidStructure


def random_structure(rng: random.Random, n: int, attempts: int = 200, sigma: int = 3):
    """Grow a valid structure by trying random stacks and keeping the legal ones."""
    stacks: list[Stack] = []
    s = new_structure(n, [], sigma=sigma)
    for _ in range(attempts):
        if n < 2 * sigma + 4:
            break
        length = rng.randint(sigma, sigma + 2)
        i = rng.randint(1, n)
        j = rng.randint(i + 2 * length + 2, i + 2 * length + 2 + rng.randint(0, n))
        if j > n:
            continue
        cand = stacks + [Stack(i, j, length)]
        try:
            s = new_structure(n, [a for x in cand for a in x.arcs()], sigma=sigma)
        except InvalidStructure:
            continue
        stacks = cand
    return s


@st.composite
def structures(draw, max_n: int = 40, sigma: int = 3):
    n = draw(st.integers(min_value=0, max_value=max_n))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_structure(random.Random(seed), n, sigma=sigma)


def random_sequence(rng: random.Random, n: int, alphabet: str = "ACGU") -> str:
    return "".join(rng.choice(alphabet) for _ in range(n))


@pytest.fixture
def rng():
    return random.Random(20240611)


def verify_decomposition(s, d):
    """Re-check a loop decomposition against the loop definitions; returns problems."""
    from crossfold.decomposition import HAIRPIN, INTERIOR, MULTI, PSEUDOKNOT
    from crossfold.diagrams import crosses, precedes

    problems = []
    partner = s.partner
    arcs = set(s.arcs)
    # arcs and vertices coloured exactly once
    if set(d.arc_colors) != arcs:
        problems.append("arc colouring does not cover the arc set")
    if sorted(d.vertex_colors) != list(range(1, s.n + 1)):
        problems.append("vertex colouring does not cover 1..n")
    owners: dict[int, int] = {}
    for idx, loop in enumerate(d.loops):
        for a, b in loop.intervals:
            for p in range(a, b + 1):
                if p in owners:
                    problems.append(f"vertex {p} in two loops")
                owners[p] = idx
    for a, b in d.exterior:
        for p in range(a, b + 1):
            if p in owners:
                problems.append(f"exterior vertex {p} also in a loop")
            owners[p] = -1
    if sorted(owners) != s.unpaired():
        problems.append("unpaired vertices not partitioned")
    stack_owner = [st for loop in d.loops for st in loop.stacks]
    if sorted(stack_owner) != sorted(s.stacks):
        problems.append("stacks not partitioned among loops")

    core_arcs = [st.outermost for st in s.stacks]
    stack_of = {st.outermost: st for st in s.stacks}

    def minimal_crossing(a, b):
        rivals = [c for c in core_arcs if crosses(c, b)]
        return crosses(a, b) and not any(precedes(stack_of[c].outermost, stack_of[a].innermost)
                                         for c in rivals if c != a)

    for loop in d.loops:
        free = [p for a, b in loop.intervals for p in range(a, b + 1)]
        if any(partner[p] for p in free):
            problems.append(f"{loop.kind} interval contains a paired vertex")
        if loop.kind == HAIRPIN:
            (p, q), = loop.closing
            if (p, q) not in arcs or loop.intervals != [(p + 1, q - 1)]:
                problems.append(f"bad hairpin {loop.closing} {loop.intervals}")
        elif loop.kind == INTERIOR:
            (i1, j1), (i2, j2) = loop.closing
            if not precedes((i2, j2), (i1, j1)) or (i2, j2) == (i1 + 1, j1 - 1):
                problems.append(f"bad interior {loop.closing}")
            want = [(a, b) for a, b in ((i1 + 1, i2 - 1), (j2 + 1, j1 - 1)) if a <= b]
            if loop.intervals != want:
                problems.append(f"interior intervals {loop.intervals} != {want}")
            if any(partner[p] for p in range(i1 + 1, i2)) or any(partner[p] for p in range(j2 + 1, j1)):
                problems.append("interior loop has extra pairs")
        elif loop.kind == MULTI:
            (i1, j1) = loop.closing[0]
            h = len(loop.closing) - 1 + len(loop.branches)
            closing_stack = next(st for st in s.stacks if st.innermost == (i1, j1))

            def has_crossing(lo, hi):
                inside = [a for a in s.arcs if lo <= a[0] and a[1] <= hi]
                return any(crosses(a, b) for a in inside for b in inside)

            crossing_part = closing_stack in d.pk_stacks or any(has_crossing(*br) for br in loop.branches)
            if h < 1 or (h < 2 and not crossing_part):
                problems.append(f"multi with too few components {loop.closing}")
            if any(not (i1 < p < j1) for p in free):
                problems.append("multi interval outside closing arc")
        elif loop.kind == PSEUDOKNOT:
            pk = [st.outermost for st in loop.stacks]
            seen, todo = {pk[0]}, [pk[0]]
            while todo:
                a = todo.pop()
                for b in pk:
                    if b not in seen and crosses(a, b):
                        seen.add(b)
                        todo.append(b)
            if len(seen) != len(pk):
                problems.append("pseudoknot line graph not connected")
            for a in pk:
                if not any(minimal_crossing(a, b) for b in core_arcs):
                    problems.append(f"pseudoknot arc {a} is not minimal crossing")
            lo, hi = min(a[0] for a in pk), max(a[1] for a in pk)
            if any(not (lo < p < hi) for p in free):
                problems.append("pseudoknot vertex outside its span")
    return problems


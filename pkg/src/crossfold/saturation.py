"""Minimum free energy folding over skeleta.

Segments are filled by increasing length. For each segment ``[i, j]`` two kinds
of closed blocks are priced: a noncrossing stack on ``(i, j)`` with whatever
sits under its innermost arc, and a skeleton spanning ``[i, j]`` whose
intervals are saturated from shorter segments. Fillings are then assembled in
three contexts (exterior, pseudoknot and multi-loop), the last one split by
how many blocks it holds because interior and multi-loop pricing depend on it.

Every table entry is ``(energy, arcs)`` with energy in hundredths; ties go to
the smaller :func:`~crossfold.energy.tie_key`.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .decomposition import LoopDecomposition, crossing_components, loop_decompose, skeleton_layout
from .diagrams import Arc, Stack, Structure, new_structure
from .energy import EnergyModel, check_sequence, decomposition_cents, tie_key
from .errors import InvalidParams
from .skeleta import skeleta_trees

ZERO, ONE, MANY = 0, 1, 2  # order classes of a multi-loop filling
EMPTY = (0, ())


def _better(e: int, arcs, best) -> bool:
    if best is None or e < best[0]:
        return True
    return e == best[0] and tie_key(arcs) < tie_key(best[1])


def _add(a, b):
    if a is None or b is None:
        return None
    return a[0] + b[0], a[1] + b[1]


def _pick(*cands):
    best = None
    for c in cands:
        if c is not None and _better(c[0], c[1], best):
            best = c
    return best


# -- skeleton plans -------------------------------------------------------------

@dataclass
class SkeletonPlan:
    """Sequence-independent pricing recipe for one skeleton (relative coordinates)."""

    stacks: tuple[Stack, ...]
    check: tuple[tuple[int, int], ...]  # arcs that must be pairable, beyond the parent's
    stack_pairs: int
    pseudoknots: int
    multi_closing: tuple[int, ...]
    pk_gaps: tuple[tuple[int, int], ...]
    mul_gaps: tuple[tuple[int, int], ...]
    interiors: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    children: list["SkeletonPlan"] = field(default_factory=list)

    def base(self, em: EnergyModel) -> int:
        return (em.pk_stack * self.stack_pairs + em.P_pk * self.pseudoknots
                + sum(em.M + em.P1 * c for c in self.multi_closing))


def _plan(stacks, check) -> SkeletonPlan:
    lay = skeleton_layout(list(stacks))
    st = lay.stacks
    mul_gaps = tuple(g for _, _, gaps in lay.multis for g in gaps)
    return SkeletonPlan(
        tuple(st), tuple(check),
        stack_pairs=sum(s.length - 1 for s in st),
        pseudoknots=len(lay.pseudoknots),
        multi_closing=tuple(1 + len(tops) for _, tops, _ in lay.multis),
        pk_gaps=tuple(g for _, gaps in lay.pseudoknots for g in gaps),
        mul_gaps=mul_gaps,
        interiors=tuple((left, right) for _, _, left, right in lay.interiors),
    )


_PLANS: dict[tuple, list[SkeletonPlan]] = {}


def skeleton_plans(span: int, sigma: int = 3, max_stacks: int | None = 3) -> list[SkeletonPlan]:
    """Plan forests mirroring the skeleta-trees over ``span``; cached per process."""
    key = (span, sigma, max_stacks)
    if key in _PLANS:
        return _PLANS[key]
    roots = []
    for tree in skeleta_trees(span, sigma, max_stacks):
        nodes = []
        for v, rs in enumerate(tree.vertices):
            if v == 0:
                check = [a for s in rs.skeleton.stacks for a in s.arcs()]
            else:
                check = tree.label[v].arcs()
            nodes.append(_plan(rs.skeleton.stacks, check))
            if v:
                nodes[tree.parent[v]].children.append(nodes[v])
        roots.append(nodes[0])
    _PLANS[key] = roots
    return roots


# -- tables ---------------------------------------------------------------------

@dataclass
class FoldTables:
    """Cells indexed ``[i][j]`` (1-based, ``j = i - 1`` is the empty segment)."""

    n: int
    osm_sec: list = field(default_factory=list)
    osm_skel: list = field(default_factory=list)
    os: list = field(default_factory=list)
    os_pk: list = field(default_factory=list)
    os_mul: list = field(default_factory=list)  # [class][i][j]
    skeleta_tried: int = 0

    @classmethod
    def empty(cls, n: int) -> "FoldTables":
        def grid(fill=None):
            return [[fill] * (n + 2) for _ in range(n + 2)]

        t = cls(n, grid(), grid(), grid(), grid(), [grid(), grid(), grid()])
        for i in range(1, n + 2):
            t.os[i][i - 1] = t.os_pk[i][i - 1] = t.os_mul[ZERO][i][i - 1] = EMPTY
        return t

    def osm(self, i: int, j: int):
        return _pick(self.osm_sec[i][j], self.osm_skel[i][j])

    def mul_any(self, i: int, j: int):
        return _pick(*(self.os_mul[c][i][j] for c in (ZERO, ONE, MANY)))

    def mul_nonzero(self, i: int, j: int):
        return _pick(self.os_mul[ONE][i][j], self.os_mul[MANY][i][j])


@dataclass
class FoldResult:
    structure: Structure
    energy_cents: int
    decomposition: LoopDecomposition
    provenance: list[tuple[int, int, tuple[Stack, ...]]]
    seconds: float = 0.0

    @property
    def energy(self) -> float:
        return self.energy_cents / 100


class _Folder:
    def __init__(self, seq: str, em: EnergyModel, sigma: int, max_stacks: int | None,
                 lam: int = 4):
        self.seq, self.em, self.sigma, self.max_stacks, self.lam = seq, em, sigma, max_stacks, lam
        n = self.n = len(seq)
        self.pair = [[False] * (n + 2) for _ in range(n + 2)]
        for i in range(1, n + 1):
            for j in range(i + lam, n + 1):
                self.pair[i][j] = em.can_pair(seq[i - 1], seq[j - 1])
        self.t = FoldTables.empty(n)
        self.case1: dict[tuple[int, int], tuple] = {}
        self.sec_cells: list[tuple[int, int]] = []

    # Case 1: what sits under the innermost arc (p, q) of a noncrossing stack
    def hairpin_context(self, p: int, q: int):
        key = (p, q)
        if key in self.case1:
            return self.case1[key]
        em, t = self.em, self.t
        best = (em.H(q - p - 1), ())
        for a, b in self.sec_cells:
            if p < a and b < q and (a, b) != (p + 1, q - 1):
                cell = t.osm_sec[a][b]
                e = em.I(a - p - 1 + q - b - 1) + cell[0]
                if _better(e, cell[1], best):
                    best = (e, cell[1])
        multi = t.os_mul[MANY][p + 1][q - 1]
        if multi is not None:
            e = em.M + em.P1 + multi[0]
            if _better(e, multi[1], best):
                best = (e, multi[1])
        self.case1[key] = best
        return best

    def noncrossing_block(self, i: int, j: int):
        best = None
        length = 0
        while self.pair[i + length][j - length]:
            length += 1
            if length < self.sigma:
                continue
            p, q = i + length - 1, j - length + 1
            inner = self.hairpin_context(p, q)
            e = self.em.stack_term(length, False) + inner[0]
            arcs = tuple(Arc(i + s, j - s) for s in range(length)) + inner[1]
            if _better(e, arcs, best):
                best = (e, arcs)
        return best

    def skeleton_block(self, i: int, j: int, plans=None):
        off = i - 1
        pair, em, t = self.pair, self.em, self.t
        best = None
        if plans is None:
            plans = skeleton_plans(j - i + 1, self.sigma, self.max_stacks)
        todo = list(plans)
        while todo:
            plan = todo.pop()
            if not all(pair[a + off][b + off] for a, b in plan.check):
                continue
            todo.extend(plan.children)
            self.t.skeleta_tried += 1
            e = plan.base(em)
            parts = []
            for u, v in plan.pk_gaps:
                cell = t.os_pk[u + off][v + off]
                e += cell[0]
                parts.append(cell[1])
            for u, v in plan.mul_gaps:
                cell = t.mul_any(u + off, v + off)
                e += cell[0]
                parts.append(cell[1])
            for (a0, a1), (b0, b1) in plan.interiors:
                A = (a0 + off, a1 + off)
                B = (b0 + off, b1 + off)
                plain = (em.I(max(0, a1 - a0 + 1) + max(0, b1 - b0 + 1)), ())
                nz_a, nz_b = t.mul_nonzero(*A), t.mul_nonzero(*B)
                filled = _pick(_add(nz_a, t.mul_any(*B)), _add(t.mul_any(*A), nz_b))
                if filled is not None:
                    filled = (filled[0] + em.M + 2 * em.P1, filled[1])
                cell = _pick(plain, filled)
                e += cell[0]
                parts.append(cell[1])
            if best is not None and e > best[0]:
                continue
            arcs = [Arc(a + off, b + off) for s in plan.stacks for a, b in s.arcs()]
            for p in parts:
                arcs.extend(p)
            arcs = tuple(sorted(arcs))
            if _better(e, arcs, best):
                best = (e, arcs)
        return best

    def blocks(self, i: int, j: int) -> None:
        t = self.t
        if j - i >= 2 * self.sigma - 2 + self.lam:
            sec = self.noncrossing_block(i, j)
            t.osm_sec[i][j] = sec
            if sec is not None:
                self.sec_cells.append((i, j))
            t.osm_skel[i][j] = self.skeleton_block(i, j)

    def fillings(self, i: int, j: int) -> None:
        t, em = self.t, self.em
        ext = _add(t.os[i + 1][j], (em.Q, ()))
        pk = _add(t.os_pk[i + 1][j], (em.Q_pk, ()))
        zero = (em.Q_mul * (j - i + 1), ())
        one = _add(t.os_mul[ONE][i + 1][j], (em.Q_mul, ()))
        many = _add(t.os_mul[MANY][i + 1][j], (em.Q_mul, ()))
        for s in range(i, j + 1):
            sec, skel = t.osm_sec[i][s], t.osm_skel[i][s]
            if sec is None and skel is None:
                continue
            block = _pick(sec, skel)
            ext = _pick(ext, _add(block, t.os[s + 1][j]))
            pk = _pick(pk, _add(block, t.os_pk[s + 1][j]))
            if sec is not None:
                sec_p = (sec[0] + em.P1, sec[1])
                one = _pick(one, _add(sec_p, t.os_mul[ZERO][s + 1][j]))
                many = _pick(many, _add(sec_p, t.mul_nonzero(s + 1, j)))
            if skel is not None:
                many = _pick(many, _add((skel[0] + em.P1, skel[1]), t.mul_any(s + 1, j)))
        t.os[i][j], t.os_pk[i][j] = ext, pk
        t.os_mul[ZERO][i][j], t.os_mul[ONE][i][j], t.os_mul[MANY][i][j] = zero, one, many

    def run(self, threads: int = 1) -> FoldTables:
        n = self.n
        pool = ThreadPoolExecutor(threads) if threads > 1 else None
        try:
            for d in range(n):
                cells = [(i, i + d) for i in range(1, n - d + 1)]
                if pool is None:
                    for i, j in cells:
                        self.blocks(i, j)
                else:
                    list(pool.map(lambda c: self.blocks(*c), cells))
                # sec_cells order must not depend on scheduling
                self.sec_cells.sort(key=lambda c: (c[1] - c[0], c[0]))
                for i, j in cells:
                    self.fillings(i, j)
        finally:
            if pool is not None:
                pool.shutdown()
        return self.t


def compute_osm(folder: _Folder, i: int, j: int) -> None:
    folder.blocks(i, j)


def compute_os(folder: _Folder, i: int, j: int) -> None:
    folder.fillings(i, j)


def saturate_skeleton(stacks, offset: int, folder: _Folder):
    """Price one skeleton placed at ``offset`` against filled tables.

    Returns ``(energy_cents, arcs)`` or ``None`` if a skeleton arc cannot pair.
    """
    stacks = [Stack(*s) for s in stacks]
    plan = _plan(stacks, [a for s in stacks for a in s.arcs()])
    span = max(s.j for s in stacks)
    return folder.skeleton_block(offset + 1, offset + span, [plan])


def fold(seq: str, em: EnergyModel | None = None, sigma: int = 3,
         max_shadow_stacks: int | None = 3, threads: int = 1) -> FoldResult:
    """Minimum free energy structure of ``seq`` (3-noncrossing, ``sigma``-canonical)."""
    start = time.perf_counter()
    seq = check_sequence(seq)
    em = em or EnergyModel()
    if sigma < 3:
        raise InvalidParams("sigma must be >= 3")
    if max_shadow_stacks is not None and max_shadow_stacks < 2:
        raise InvalidParams("max_shadow_stacks must be >= 2")
    folder = _Folder(seq, em, sigma, max_shadow_stacks)
    tables = folder.run(threads)
    energy, arcs = tables.os[1][len(seq)]
    s = new_structure(len(seq), arcs, 3, 4, sigma)
    d = loop_decompose(s)
    check = decomposition_cents(d, em)
    if check != energy:
        raise AssertionError(f"table energy {energy} disagrees with loop energy {check}")
    prov = []
    for comp in crossing_components(s.stacks):
        if len(comp) > 1:
            members = tuple(s.stacks[c] for c in comp)
            prov.append((min(m.i for m in members), max(m.j for m in members), members))
    return FoldResult(s, energy, d, prov, time.perf_counter() - start)

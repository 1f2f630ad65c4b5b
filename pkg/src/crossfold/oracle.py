"""Brute-force ground truth: structure census, series coefficients, exhaustive mfe.

Nothing here shares code paths with the folding DP beyond the structure type and
the loop energy, which is the quantity being minimised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .diagrams import Stack, Structure, core, crosses, max_crossing, stacks_of
from .energy import EnergyModel, check_sequence, energy_cents, tie_key
from .errors import CeilingExceeded, UnsupportedK

DEFAULT_CEILING = 30


@dataclass(frozen=True)
class CensusReport:
    n: int
    k: int
    lam: int
    sigma: int
    count: int
    series: int | None = None


def _ceiling(n: int, ceiling: int) -> None:
    if n > ceiling:
        raise CeilingExceeded(f"n={n} exceeds brute-force ceiling {ceiling}")


def iter_stack_sets(n: int, k: int = 3, lam: int = 4, sigma: int = 3,
                    pairable=None) -> Iterator[list[Stack]]:
    """Yield every valid structure over 1..n as its list of maximal stacks.

    Stacks are opened at their outermost left position, so each structure is
    produced once. ``pairable(i, j)`` optionally restricts which arcs may occur.
    """
    used = [False] * (n + 2)
    outer: list[tuple[int, int]] = []
    arcset: set[tuple[int, int]] = set()
    chosen: list[Stack] = []

    def fits(i, j):
        bad = [b for b in outer if crosses((i, j), b)]
        return len(bad) < k - 1 or max_crossing(bad) < k - 1

    def walk(p):
        while p <= n and used[p]:
            p += 1
        if p > n:
            yield list(chosen)
            return
        yield from walk(p + 1)
        for q in range(p + 2 * sigma - 2 + lam, n + 1):
            if used[q] or (p - 1, q + 1) in arcset or not fits(p, q):
                continue
            length = 0
            while True:
                i, j = p + length, q - length
                if j - i < lam or used[i] or used[j]:
                    break
                if pairable is not None and not pairable(i, j):
                    break
                length += 1
                if length >= sigma:
                    st = Stack(p, q, length)
                    arcs = st.arcs()
                    for a in arcs:
                        used[a[0]] = used[a[1]] = True
                        arcset.add(a)
                    outer.append((p, q))
                    chosen.append(st)
                    yield from walk(p + length)
                    chosen.pop()
                    outer.pop()
                    for a in arcs:
                        used[a[0]] = used[a[1]] = False
                        arcset.discard(a)

    yield from walk(1)


def enumerate_structures(n: int, k: int = 3, lam: int = 4, sigma: int = 3,
                         ceiling: int = DEFAULT_CEILING) -> list[Structure]:
    _ceiling(n, ceiling)
    out = []
    for stacks in iter_stack_sets(n, k, lam, sigma):
        arcs = [a for st in stacks for a in st.arcs()]
        out.append(Structure(n, tuple(arcs), k, lam, sigma))
    return out


def count_structures(n: int, k: int = 3, lam: int = 4, sigma: int = 3,
                     ceiling: int = DEFAULT_CEILING) -> int:
    _ceiling(n, ceiling)
    return sum(1 for _ in iter_stack_sets(n, k, lam, sigma))


# -- generating-function pipeline ---------------------------------------------

@lru_cache(maxsize=None)
def noncrossing_matchings(m: int, k: int = 3) -> int:
    """f_k(2m, 0): perfect matchings of 2m points with no k mutually crossing arcs."""
    points = 2 * m
    partner = [0] * (points + 1)
    arcs: list[tuple[int, int]] = []

    def walk(p):
        while p <= points and partner[p]:
            p += 1
        if p > points:
            return 1
        total = 0
        for q in range(p + 1, points + 1):
            if partner[q]:
                continue
            bad = [b for b in arcs if crosses((p, q), b)]
            if len(bad) >= k - 1 and max_crossing(bad) >= k - 1:
                continue
            partner[p], partner[q] = q, p
            arcs.append((p, q))
            total += walk(p + 1)
            arcs.pop()
            partner[p] = partner[q] = 0
        return total

    return walk(1)


def _mul(a: list, b: list, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def _inv(a: list, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    out[0] = 1 / Fraction(a[0])
    for m in range(1, order + 1):
        acc = sum((a[t] * out[m - t] for t in range(1, min(m, len(a) - 1) + 1)), Fraction(0))
        out[m] = -acc * out[0]
    return out


@lru_cache(maxsize=None)
def structure_series(order: int, k: int = 3, sigma: int = 3) -> tuple[int, ...]:
    """Coefficients 0..order of the structure generating function.

    Expands ``(1/v0) * sum_m f_k(2m,0) * (w0 x^2 / v0^2)^m`` over exact rationals;
    only even powers of the inner argument occur, so no square roots are needed.
    """
    if k != 3:
        raise UnsupportedK("series pipeline supports k = 3 only")

    def poly(coeffs: dict[int, int]) -> list:
        out = [Fraction(0)] * (order + 1)
        for d, c in coeffs.items():
            if d <= order:
                out[d] += c
        return out

    # w0 = x^(2s-2) / (1 - x^2 + x^(2s))
    w = _mul(poly({2 * sigma - 2: 1}), _inv(poly({0: 1, 2: -1, 2 * sigma: 1}), order), order)
    # v0 = 1 - x + w0 (x^2 + x^3 + x^4)
    v = _mul(w, poly({2: 1, 3: 1, 4: 1}), order)
    v = [a + b for a, b in zip(v, poly({0: 1, 1: -1}))]
    inv_v = _inv(v, order)
    arg = _mul(_mul(w, poly({2: 1}), order), _mul(inv_v, inv_v, order), order)
    total = [Fraction(0)] * (order + 1)
    power = poly({0: 1})
    m = 0
    while any(power):
        c = noncrossing_matchings(m, k)
        total = [t + c * p for t, p in zip(total, power)]
        power = _mul(power, arg, order)
        m += 1
    total = _mul(total, inv_v, order)
    assert all(t.denominator == 1 for t in total)
    return tuple(int(t) for t in total)


def series_count(n: int, k: int = 3, sigma: int = 3) -> int:
    if n > 40:
        raise CeilingExceeded("series pipeline is bounded at n = 40")
    return structure_series(n, k, sigma)[n]


def census(n: int, k: int = 3, lam: int = 4, sigma: int = 3, with_series: bool = True,
           ceiling: int = DEFAULT_CEILING) -> CensusReport:
    count = count_structures(n, k, lam, sigma, ceiling)
    series = series_count(n, k, sigma) if with_series and k == 3 and lam == 4 and n <= 40 else None
    return CensusReport(n, k, lam, sigma, count, series)


# -- skeleta census -------------------------------------------------------------

def is_skeleton(s: Structure) -> bool:
    """Ends paired, every core arc crossed and the crossing graph connected.

    Written against the raw arc set rather than stack lists so that it does not
    share logic with the insertion grammar it is used to check.
    """
    if not s.arcs or not s.partner[1] or not s.partner[s.n]:
        return False
    cs = core(s).structure
    arcs = list(cs.arcs)
    reach = {arcs[0]}
    todo = [arcs[0]]
    while todo:
        a = todo.pop()
        for b in arcs:
            if b not in reach and crosses(a, b):
                reach.add(b)
                todo.append(b)
    return len(reach) == len(arcs) >= 2


def enumerate_skeleta(span: int, sigma: int = 3, containing=(), k: int = 3, lam: int = 4,
                      ceiling: int = DEFAULT_CEILING) -> list[Structure]:
    """All skeleta over ``1..span`` in which each stack of ``containing`` is a maximal stack."""
    _ceiling(span, ceiling)
    want = set(stacks_of(containing))
    out = []
    for stacks in iter_stack_sets(span, k, lam, sigma):
        if not want <= set(stacks):
            continue
        s = Structure(span, tuple(a for st in stacks for a in st.arcs()), k, lam, sigma)
        if is_skeleton(s):
            out.append(s)
    return out


# -- exhaustive mfe -------------------------------------------------------------

@dataclass(frozen=True)
class OracleFold:
    structure: Structure
    energy_cents: int
    candidates: int

    @property
    def energy(self) -> float:
        return self.energy_cents / 100


def brute_force_fold(seq: str, em: EnergyModel | None = None, sigma: int = 3, k: int = 3,
                     lam: int = 4, ceiling: int = DEFAULT_CEILING) -> OracleFold:
    """Minimum loop energy over every admissible structure, same tie-break as folding."""
    seq = check_sequence(seq)
    em = em or EnergyModel()
    n = len(seq)
    _ceiling(n, ceiling)

    def pairable(i, j):
        return em.can_pair(seq[i - 1], seq[j - 1])

    best = None
    count = 0
    for stacks in iter_stack_sets(n, k, lam, sigma, pairable):
        count += 1
        s = Structure(n, tuple(a for st in stacks for a in st.arcs()), k, lam, sigma)
        e = energy_cents(s, seq, em)
        if best is None or (e, tie_key(s.arcs)) < (best[0], tie_key(best[1].arcs)):
            best = (e, s)
    return OracleFold(best[1], best[0], count)

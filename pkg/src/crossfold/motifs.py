"""Motifs, their Motzkin-path duals, exact motif counts and growth rates."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterator

from .diagrams import Structure, new_structure, precedes
from .errors import InvalidParams, MalformedPath, NoConvergence, NotAMotif

UP, DOWN, FLAT = "U", "D", "H"


@dataclass(frozen=True)
class MotzkinPath:
    steps: str

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def heights(self) -> list[int]:
        h, out = 0, [0]
        for s in self.steps:
            h += 1 if s == UP else -1 if s == DOWN else 0
            out.append(h)
        return out

    def runs(self) -> list[tuple[str, int, int]]:
        """Maximal runs as ``(step, start, length)`` with 1-based starts."""
        out = []
        for idx, s in enumerate(self.steps, start=1):
            if out and out[-1][0] == s:
                out[-1] = (s, out[-1][1], out[-1][2] + 1)
            else:
                out.append((s, idx, 1))
        return out

    def is_valid(self, k: int, sigma: int) -> bool:
        hs = self.heights
        if hs[-1] != 0 or min(hs) < 0 or max(hs) > sigma * (k - 1):
            return False
        return all(length % sigma == 0 for s, _, length in self.runs() if s != FLAT)


@dataclass(frozen=True)
class MotifCounts:
    mu_star: tuple[int, ...]
    mu: tuple[int, ...]


@dataclass(frozen=True)
class GrowthRate:
    value: float
    residual: float


def _check(k: int, sigma: int, min_sigma: int = 2) -> None:
    if k < 2 or sigma < min_sigma:
        raise InvalidParams(f"need k >= 2 and sigma >= {min_sigma}, got k={k}, sigma={sigma}")


def _mu_level(h: int, n: int, sigma: int) -> list[int]:
    """Counts of block paths with height <= sigma*(h-1), lengths 0..n."""
    if h == 1:
        return [1] * (n + 1)
    below = _mu_level(h - 1, n, sigma)
    mu = [0] * (n + 1)
    for m in range(n + 1):
        if m <= 2 * sigma - 1:
            mu[m] = 1
            continue
        mu[m] = mu[m - 1] + sum(below[m - 2 * sigma - s] * mu[s] for s in range(m - 2 * sigma + 1))
    return mu


def count_motifs(n: int, k: int = 3, sigma: int = 3) -> MotifCounts:
    _check(k, sigma)
    if n < 0:
        raise InvalidParams("n must be non-negative")
    mu = _mu_level(k - 1, n, sigma)
    star = [0] * (n + 1)
    for m in range(n + 1):
        if m <= 2 * sigma:
            star[m] = 1
            continue
        star[m] = star[m - 1] + sum(mu[m - 2 * sigma - s] * star[s]
                                    for s in range(m - (2 * sigma + 3) + 1))
    return MotifCounts(tuple(star), tuple(mu))


def enumerate_paths(n: int, k: int, sigma: int) -> Iterator[MotzkinPath]:
    """All paths of length n with conditions (a) and (b), in lexicographic H<U<D order."""
    top = sigma * (k - 1)
    steps: list[str] = []

    def walk(height: int, left: int):
        if height > left:
            return
        if left == 0:
            yield MotzkinPath("".join(steps))
            return
        steps.append(FLAT)
        yield from walk(height, left - 1)
        steps.pop()
        if height + sigma <= top and left >= sigma:
            steps.extend(UP * sigma)
            yield from walk(height + sigma, left - sigma)
            del steps[-sigma:]
        if height >= sigma and left >= sigma:
            steps.extend(DOWN * sigma)
            yield from walk(height - sigma, left - sigma)
            del steps[-sigma:]

    yield from walk(0, n)


def path_arcs(p: MotzkinPath, sigma: int) -> list[tuple[int, int]]:
    """Pair up- and down-blocks first-in-first-out; each pair becomes a stack."""
    opened: deque[int] = deque()
    arcs = []
    for step, start, length in p.runs():
        if step == FLAT:
            continue
        if length % sigma:
            raise MalformedPath(f"run of {length} {step}-steps at {start} not divisible by {sigma}")
        for b in range(start, start + length, sigma):
            if step == UP:
                opened.append(b)
            else:
                if not opened:
                    raise MalformedPath(f"down-block at {b} has no open up-block")
                u = opened.popleft()
                arcs.extend((u + t, b + sigma - 1 - t) for t in range(sigma))
    if opened:
        raise MalformedPath("path does not return to height 0")
    return arcs


def path_to_motif(p: MotzkinPath, sigma: int, k: int = 3, lam: int = 4) -> Structure:
    # arc length is not checked here; enumerate_motifs filters on it
    return Structure(len(p), tuple(path_arcs(p, sigma)), k, lam, sigma)


def is_motif(m: Structure, sigma: int | None = None) -> bool:
    sigma = m.sigma if sigma is None else sigma
    if any(st.length != sigma for st in m.stacks):
        return False
    outer = [st.outermost for st in m.stacks]
    return not any(precedes(a, b) for a in outer for b in outer)


def motif_to_path(m: Structure, sigma: int | None = None) -> MotzkinPath:
    sigma = m.sigma if sigma is None else sigma
    if not is_motif(m, sigma):
        raise NotAMotif("structure has nested core arcs or a stack of length != sigma")
    steps = [FLAT] * m.n
    for i, j in m.arcs:
        steps[i - 1] = UP
        steps[j - 1] = DOWN
    return MotzkinPath("".join(steps))


def enumerate_motifs(n: int, k: int = 3, sigma: int = 3, lam: int = 4) -> list[Structure]:
    _check(k, sigma, min_sigma=3)
    out = []
    for p in enumerate_paths(n, k, sigma):
        arcs = path_arcs(p, sigma)
        if all(j - i >= lam for i, j in arcs):
            out.append(new_structure(n, arcs, k=k, lam=lam, sigma=sigma))
    return out


# -- growth rates -------------------------------------------------------------

def _smallest_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                   grid: int = 4000) -> tuple[float, float]:
    """First sign change of f on (lo, hi) by scanning, then bisection and a Newton polish."""
    prev_x, prev_v = lo, f(lo)
    for t in range(1, grid + 1):
        x = lo + (hi - lo) * t / grid
        v = f(x)
        if math.isfinite(v) and math.isfinite(prev_v) and (v == 0 or (v < 0) != (prev_v < 0)):
            a, b, fa = prev_x, x, prev_v
            for _ in range(200):
                mid = 0.5 * (a + b)
                fm = f(mid)
                if fm == 0 or b - a < 1e-16:
                    a = b = mid
                    break
                if (fm < 0) == (fa < 0):
                    a, fa = mid, fm
                else:
                    b = mid
            root = 0.5 * (a + b)
            h = 1e-7
            for _ in range(3):
                d = (f(root + h) - f(root - h)) / (2 * h)
                if d == 0:
                    break
                step = f(root) / d
                if abs(step) > b - a + 1e-9:
                    break
                root -= step
            res = abs(f(root))
            if res > tol:
                raise NoConvergence(f"residual {res:.3e} exceeds {tol:.1e}")
            return root, res
        prev_x, prev_v = x, v
    raise NoConvergence("no sign change found")


def motif_denominator(z: float, sigma: int) -> float:
    """Denominator of the 3-noncrossing motif generating function."""
    z2s = z ** (2 * sigma)
    inner = 1.0 / (1.0 - z - z2s / (1.0 - z))
    return 1.0 - z - z2s * (inner - (z * z + z + 1.0))


def motif_growth_rate(sigma: int, tol: float = 1e-12) -> GrowthRate:
    if sigma < 2:
        raise InvalidParams("sigma must be >= 2")
    root, res = _smallest_root(lambda z: motif_denominator(z, sigma), 1e-9, 0.999, tol)
    return GrowthRate(1.0 / root, res)


def w0(x: float, sigma: int) -> float:
    return x ** (2 * sigma - 2) / (1.0 - x * x + x ** (2 * sigma))


def v0(x: float, sigma: int) -> float:
    w = w0(x, sigma)
    return 1.0 - x + w * x ** 2 + w * x ** 3 + w * x ** 4


def matching_singularity(k: int) -> float:
    """Dominant singularity of the k-noncrossing matching series (exponential base 2(k-1))."""
    return 1.0 / (2 * (k - 1))


def structure_growth_rate(k: int = 3, sigma: int = 3, tol: float = 1e-12) -> GrowthRate:
    if k < 3 or sigma < 3:
        raise InvalidParams("need k >= 3 and sigma >= 3")
    rho = matching_singularity(k)

    def g(x):
        return math.sqrt(w0(x, sigma)) * x / v0(x, sigma) - rho

    root, res = _smallest_root(g, 1e-9, 0.999, tol)
    return GrowthRate(1.0 / root, res)

"""Acceptance suite: one PASS/FAIL line per criterion, printed even under capture."""

from __future__ import annotations

import io
import itertools
import random
import time

import pytest

from crossfold.cli import main
from crossfold.decomposition import loop_decompose
from crossfold.diagrams import Stack, new_structure
from crossfold.energy import energy_cents
from crossfold.errors import InvalidStructure
from crossfold.motifs import (
    MotzkinPath,
    count_motifs,
    enumerate_motifs,
    enumerate_paths,
    motif_growth_rate,
    motif_to_path,
    path_arcs,
    path_to_motif,
    structure_growth_rate,
)
from crossfold.oracle import brute_force_fold, count_structures, enumerate_skeleta, series_count
from crossfold.saturation import fold
from crossfold.skeleta import build_skeleta_tree, enumerate_irreducible_shadows

from conftest import random_sequence, random_structure, verify_decomposition

TABLE1_ROW = {3: 2.0348, 4: 2.2644, 5: 2.4432, 6: 2.5932, 7: 2.7243, 8: 2.8414, 9: 2.9480}
TABLE1_COL = {3: 2.0348, 4: 1.7898, 5: 1.6465, 6: 1.5515, 7: 1.4834, 8: 1.4319, 9: 1.3915}
TABLE3 = {2: 1.7424, 3: 1.5457, 4: 1.4397, 5: 1.3721, 6: 1.3247, 7: 1.2894}


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_structure_growth_rates(report):
    t0 = time.perf_counter()
    devs = [abs(structure_growth_rate(k, 3).value - v) for k, v in TABLE1_ROW.items()]
    devs += [abs(structure_growth_rate(3, s).value - v) for s, v in TABLE1_COL.items()]
    elapsed = time.perf_counter() - t0
    worst = max(devs)
    report(1, worst <= 1e-3 and elapsed < 1.0,
           f"14 growth rates, max deviation {worst:.1e} (tol 1e-3), {elapsed:.3f}s (limit 1s)")


def test_criterion_2_motif_growth_rates(report):
    worst = max(abs(motif_growth_rate(s).value - v) for s, v in TABLE3.items())
    report(2, worst <= 1e-3, f"6 motif growth rates, max deviation {worst:.1e} (tol 1e-3)")


def _valid_step_product(n, sigma):
    """Full 3^n scan of step strings, then the path rules and arc length on the mapped arcs."""
    total = 0
    for steps in itertools.product("UDH", repeat=n):
        p = MotzkinPath("".join(steps))
        if p.is_valid(3, sigma) and all(j - i >= 4 for i, j in path_arcs(p, sigma)):
            total += 1
    return total


def test_criterion_3_count_agreement(report):
    t0 = time.perf_counter()
    bad = []
    for sigma in (3, 4, 5):
        counts = count_motifs(20, 3, sigma).mu_star
        for n in range(21):
            if len(enumerate_motifs(n, 3, sigma)) != counts[n]:
                bad.append(("enum", sigma, n))
        for n in range(13):
            if _valid_step_product(n, sigma) != counts[n]:
                bad.append(("product", sigma, n))
    for n in range(15):
        if series_count(n) != count_structures(n):
            bad.append(("series", 3, n))
    elapsed = time.perf_counter() - t0
    report(3, not bad and elapsed < 300,
           f"motif counts sigma 3..5 n<=20 and series n<=14, mismatches={bad}, {elapsed:.1f}s (limit 300s)")


def test_criterion_4_bijection(report):
    checked, problems = 0, 0
    for n in range(15):
        images = set()
        for p in enumerate_paths(n, 3, 3):
            m = path_to_motif(p, 3)
            problems += motif_to_path(m, 3) != p
            images.add(m.arcs)
            checked += 1
        problems += len(images) != sum(1 for _ in enumerate_paths(n, 3, 3))
    report(4, problems == 0, f"{checked} paths n<=14, round-trip or collision failures={problems}")


def test_criterion_5_grammar(report):
    shadows, distinct_fail, census_fail, direct = 0, 0, 0, 0
    for span in range(12, 25):
        census = enumerate_skeleta(span)
        census_stacks = [set(s.stacks) for s in census]
        claimed: set = set()
        for s0 in enumerate_irreducible_shadows(span, max_stacks=None):
            shadows += 1
            tree = build_skeleta_tree(s0)
            verts = [tuple(a for st in sk.stacks for a in st.arcs()) for sk in tree.skeleta()]
            keys = {tuple(sorted(v)) for v in verts}
            distinct_fail += len(keys) != len(verts)
            want = {census[c].arcs for c, st in enumerate(census_stacks) if set(s0.stacks) <= st}
            census_fail += keys != want
            if span <= 18:
                arcs = [a for st in s0.stacks for a in st.arcs()]
                direct += 1
                census_fail += keys != {s.arcs for s in enumerate_skeleta(span, containing=arcs)}
            claimed |= keys
        # every census skeleton is reached from some shadow
        census_fail += claimed != {s.arcs for s in census}
    ok = shadows >= 50 and distinct_fail == 0 and census_fail == 0
    report(5, ok, f"{shadows} irreducible shadows over spans 12..24 ({direct} checked by direct census call), "
                  f"duplicate trees={distinct_fail}, census mismatches={census_fail}")


def test_criterion_6_decomposition(report):
    rng = random.Random(6)
    failures = 0
    for _ in range(1000):
        s = random_structure(rng, rng.randint(0, 40))
        d = loop_decompose(s)
        failures += bool(verify_decomposition(s, d))
        again = loop_decompose(s)
        failures += [(lp.kind, lp.closing, lp.intervals) for lp in again.loops] != \
            [(lp.kind, lp.closing, lp.intervals) for lp in d.loops]
        failures += again.vertex_colors != d.vertex_colors
    report(6, failures == 0, f"1000 random structures n<=40, failures={failures}")


def knot_design(rng):
    """An H-type pair of crossing GC stacks embedded in an A background."""
    n = rng.randint(24, 28)
    while True:
        la, lb = rng.randint(4, 5), rng.randint(4, 5)
        i1 = rng.randint(1, 3)
        i2 = i1 + la + rng.randint(1, 3)
        j1 = i2 + lb + rng.randint(3, 5) + la - 1
        j2 = j1 + rng.randint(2, 4) + lb
        if j2 > n:
            continue
        try:
            s = new_structure(n, Stack(i1, j1, la).arcs() + Stack(i2, j2, lb).arcs())
        except InvalidStructure:
            continue
        seq = ["A"] * n
        for x, y in s.arcs:
            seq[x - 1], seq[y - 1] = rng.choice(["GC", "CG"])
        return "".join(seq), s


def test_criterion_7_mfe_oracle(report):
    t0 = time.perf_counter()
    rng = random.Random(7)
    mismatches = []
    for _ in range(1000):
        seq = random_sequence(rng, rng.randint(20, 28))
        a = fold(seq, max_shadow_stacks=None)
        b = brute_force_fold(seq)
        attains = energy_cents(a.structure, seq) == a.energy_cents
        if a.energy_cents != b.energy_cents or not attains:
            mismatches.append(seq)
    knots = 0
    for _ in range(20):
        seq, designed = knot_design(rng)
        a = fold(seq, max_shadow_stacks=None)
        b = brute_force_fold(seq)
        knots += bool(a.provenance)
        if a.energy_cents != b.energy_cents or a.energy_cents > energy_cents(designed, seq) \
                or energy_cents(a.structure, seq) != a.energy_cents:
            mismatches.append(seq)
    elapsed = time.perf_counter() - t0
    report(7, not mismatches and elapsed < 1800,
           f"1000 random + 20 constructed sequences ({knots} folded to a pseudoknot), "
           f"mismatches={len(mismatches)}, {elapsed:.1f}s (limit 1800s)")


def test_criterion_8_case_studies_excluded(report):
    out = io.StringIO()
    code = main(["selftest", "--samples", "5", "--seed", "8"], out)
    text = out.getvalue()
    ok = code == 0 and "SKIP case studies (tRNA, HDV ribozyme) are not reproduced" in text
    report(8, ok, "selftest states that the tRNA and HDV case studies are excluded")


def test_criterion_9_benchmark_logged(report):
    out = io.StringIO()
    code = main(["fold", "--benchmark", "--seed", "9", "--lengths", "12,16,20,24,28", "--samples", "3"], out)
    means = [tuple(float(x) for x in line.split()) for line in out.getvalue().splitlines()]
    ratios = [b[1] / a[1] for a, b in zip(means, means[1:]) if a[1] > 0]
    detail = "non-blocking, mean seconds by n: " + ", ".join(f"{int(n)}:{t:.3f}" for n, t in means)
    detail += " | step ratios: " + ", ".join(f"{r:.2f}" for r in ratios)
    report(9, code == 0 and len(means) == 5, detail)

"""Quick self-check used by ``crossfold selftest``."""

from __future__ import annotations

import random

from .motifs import motif_growth_rate, structure_growth_rate
from .oracle import brute_force_fold, count_structures, series_count
from .saturation import fold

STRUCTURE_RATES_SIGMA3 = {3: 2.0348, 4: 2.2644, 5: 2.4432, 6: 2.5932, 7: 2.7243, 8: 2.8414, 9: 2.9480}
MOTIF_RATES = {2: 1.7424, 3: 1.5457, 4: 1.4397, 5: 1.3721, 6: 1.3247, 7: 1.2894}

EXCLUDED = ("case studies (tRNA, HDV ribozyme) are not reproduced: they depend on loop "
            "energy tables that are not available, so only the toy model is checked")


def run_selftest(out, seed: int = 0, samples: int = 20) -> bool:
    ok_all = True

    def report(name, ok, detail=""):
        nonlocal ok_all
        ok_all &= ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}{' ' + detail if detail else ''}\n")

    worst = max(abs(structure_growth_rate(k, 3).value - v) for k, v in STRUCTURE_RATES_SIGMA3.items())
    report("structure-growth-rates", worst <= 1e-3, f"max-dev={worst:.2e}")
    worst = max(abs(motif_growth_rate(s).value - v) for s, v in MOTIF_RATES.items())
    report("motif-growth-rates", worst <= 1e-3, f"max-dev={worst:.2e}")
    bad = [n for n in range(15) if count_structures(n) != series_count(n)]
    report("census-vs-series", not bad, f"n<=14 mismatches={bad}")

    rng = random.Random(seed)
    mismatches = 0
    for _ in range(samples):
        n = rng.randint(16, 22)
        seq = "".join(rng.choice("ACGU") for _ in range(n))
        a = fold(seq, max_shadow_stacks=None)
        b = brute_force_fold(seq)
        mismatches += a.energy_cents != b.energy_cents or a.structure.arcs != b.structure.arcs
    report("fold-vs-oracle", mismatches == 0, f"samples={samples} mismatches={mismatches}")
    out.write(f"SKIP {EXCLUDED}\n")
    return ok_all

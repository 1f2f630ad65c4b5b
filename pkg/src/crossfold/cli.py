"""Command-line front end.

Exit status is 0 on success, 1 when a library call raises a domain error and
2 for usage errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time
from pathlib import Path

from .decomposition import loop_decompose
from .diagrams import format_arc_list, parse_arc_list, to_bracket
from .energy import EnergyModel, format_cents, parse_energy_config
from .errors import CrossfoldError, FormatError
from .motifs import count_motifs, enumerate_motifs, motif_growth_rate, motif_to_path, structure_growth_rate
from .oracle import DEFAULT_CEILING, brute_force_fold, census
from .saturation import fold

log = logging.getLogger("crossfold")


def read_records(text: str) -> list[tuple[str | None, str]]:
    """Plain sequence (any line breaks) or ``>``-header records."""
    lines = [ln.strip() for ln in text.splitlines()]
    if not any(ln.startswith(">") for ln in lines):
        seq = "".join(ln for ln in lines if ln)
        if not seq:
            raise FormatError("no sequence found")
        return [(None, seq)]
    records: list[tuple[str | None, str]] = []
    for ln in lines:
        if ln.startswith(">"):
            records.append((ln[1:].strip(), ""))
        elif ln:
            if not records:
                raise FormatError("sequence data before the first header")
            name, seq = records[-1]
            records[-1] = (name, seq + ln)
    return records


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _energy(args) -> EnergyModel:
    if getattr(args, "energy", None):
        return parse_energy_config(Path(args.energy).read_text())
    return EnergyModel()


def _max_stacks(value: str):
    if value in ("none", "all", "0"):
        return None
    v = int(value)
    if v < 2:
        raise argparse.ArgumentTypeError("max-shadow-stacks must be >= 2 (or 'none')")
    return v


def _sigma(value: str) -> int:
    v = int(value)
    if v < 3:
        raise argparse.ArgumentTypeError("sigma must be >= 3")
    return v


def _int_list(value: str) -> list[int]:
    out = []
    for part in value.split(","):
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def render_fold(seq: str, structure, energy_cents: int, fmt: str) -> str:
    lines = [seq]
    if fmt in ("bracket", "both"):
        lines.append(to_bracket(structure))
    lines.append(f"ENERGY {format_cents(energy_cents)}")
    out = "\n".join(lines) + "\n"
    if fmt in ("arcs", "both"):
        out += format_arc_list(structure)
    return out


def cmd_fold(args, out, oracle: bool = False) -> int:
    em = _energy(args)
    if getattr(args, "benchmark", False):
        return _benchmark(args, em, out)
    for name, seq in read_records(_read_input(args.input)):
        if name is not None:
            out.write(f">{name}\n")
        if oracle:
            res = brute_force_fold(seq, em, sigma=args.sigma, ceiling=args.ceiling)
        else:
            res = fold(seq, em, sigma=args.sigma, max_shadow_stacks=args.max_shadow_stacks,
                       threads=args.threads)
        out.write(render_fold(seq.upper().replace("T", "U"), res.structure, res.energy_cents,
                              args.format))
    return 0


def _benchmark(args, em, out) -> int:
    rng = random.Random(args.seed)
    for n in args.lengths:
        times = []
        for idx in range(args.samples):
            seq = "".join(rng.choice("ACGU") for _ in range(n))
            t0 = time.perf_counter()
            fold(seq, em, sigma=args.sigma, max_shadow_stacks=args.max_shadow_stacks,
                 threads=args.threads)
            dt = time.perf_counter() - t0
            times.append(dt)
            log.info("n=%d sample=%d seconds=%.4f", n, idx, dt)
        out.write(f"{n} {sum(times) / len(times):.4f}\n")
    return 0


def cmd_decompose(args, out) -> int:
    s = parse_arc_list(_read_input(args.input), sigma=args.sigma)
    d = loop_decompose(s)
    for loop in d.loops:
        closing = ",".join(f"({a.i},{a.j})" for a in loop.closing)
        ivs = ",".join(f"[{a},{b}]" for a, b in loop.intervals) or "-"
        out.write(f"{loop.kind.upper()} {closing} {ivs}\n")
    letters = {"purple": "P", "green": "G", "blue": "B", "red": "R", "black": "K"}
    out.write("VERTICES " + "".join(letters[d.vertex_colors[p]] for p in range(1, s.n + 1)) + "\n")
    return 0


def cmd_motifs(args, out) -> int:
    if args.list:
        for m in enumerate_motifs(args.n, args.k, args.sigma):
            arcs = " ".join(f"{i}-{j}" for i, j in m.arcs) or "-"
            out.write(f"{motif_to_path(m).steps} {arcs}\n")
        return 0
    counts = count_motifs(args.n, args.k, args.sigma)
    for m in range(args.n + 1):
        out.write(f"{m} {counts.mu_star[m]}\n")
    return 0


def cmd_census(args, out) -> int:
    for n in args.n:
        rep = census(n, args.k, 4, args.sigma, with_series=False, ceiling=args.ceiling)
        out.write(f"{n} {rep.count}\n")
    return 0


def cmd_growth(args, out) -> int:
    for k in args.k:
        for sigma in args.sigma:
            if args.motif:
                rate = motif_growth_rate(sigma).value
            else:
                rate = structure_growth_rate(k, sigma).value
            out.write(f"{k} {sigma} {rate:.4f}\n")
    return 0


def cmd_selftest(args, out) -> int:
    from .selftest import run_selftest

    return 0 if run_selftest(out, seed=args.seed if args.seed is not None else 0,
                             samples=args.samples) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossfold", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def folding(p, oracle=False):
        p.add_argument("input", nargs="?", help="sequence file (default stdin)")
        p.add_argument("--sigma", type=_sigma, default=3)
        p.add_argument("--max-shadow-stacks", type=_max_stacks, default=3)
        p.add_argument("--energy", help="key=value energy configuration file")
        p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int)
        p.add_argument("--format", choices=("bracket", "arcs", "both"), default="both")
        if not oracle:
            p.add_argument("--benchmark", action="store_true",
                           help="fold seeded random sequences and log wall times")
            p.add_argument("--lengths", type=_int_list, default=[16, 20, 24, 28])
            p.add_argument("--samples", type=int, default=3)

    folding(sub.add_parser("fold", help="minimum free energy folding"))
    folding(sub.add_parser("oracle-fold", help="exhaustive minimum free energy search"), oracle=True)

    p = sub.add_parser("decompose", help="loop decomposition of an arc list")
    p.add_argument("input", nargs="?")
    p.add_argument("--sigma", type=_sigma, default=3)

    p = sub.add_parser("motifs", help="motif counts or listing")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--sigma", type=int, default=3)
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("census", help="brute-force structure counts")
    p.add_argument("--n", type=_int_list, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--sigma", type=_sigma, default=3)
    p.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)

    p = sub.add_parser("growth", help="exponential growth rates")
    p.add_argument("--k", type=_int_list, default=[3])
    p.add_argument("--sigma", type=_int_list, default=[3])
    p.add_argument("--motif", action="store_true", help="motif rates instead of structure rates")

    p = sub.add_parser("selftest", help="oracle equivalence and golden tables")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=20)
    return parser


COMMANDS = {
    "fold": cmd_fold,
    "oracle-fold": lambda a, o: cmd_fold(a, o, oracle=True),
    "decompose": cmd_decompose,
    "motifs": cmd_motifs,
    "census": cmd_census,
    "growth": cmd_growth,
    "selftest": cmd_selftest,
}


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out or sys.stdout
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "benchmark", False) and args.seed is None:
        parser.error("--benchmark requires --seed")
    try:
        return COMMANDS[args.command](args, out)
    except CrossfoldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

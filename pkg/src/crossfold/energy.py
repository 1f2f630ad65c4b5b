"""Toy loop-based energy model and structure pricing.

Energies are held internally as integer hundredths so that minima and ties are
exact. The defaults keep stacking stabilising and every loop destabilising,
which is enough to make folding choices non-trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation

from .decomposition import HAIRPIN, INTERIOR, MULTI, PSEUDOKNOT, LoopDecomposition, loop_decompose
from .diagrams import Structure, precedes
from .errors import ConfigError, InadmissiblePair, InvalidAlphabet, InvalidParams

ALPHABET = frozenset("ACGU")
DEFAULT_PAIRS = ("AU", "UA", "GC", "CG", "GU", "UG")


def to_cents(value) -> int:
    """Convert a decimal quantity with at most two decimals to hundredths."""
    try:
        d = Decimal(str(value)) * 100
    except InvalidOperation:
        raise ConfigError(f"not a number: {value!r}") from None
    if d != d.to_integral_value():
        raise ConfigError(f"{value} has more than two decimals")
    return int(d)


def format_cents(c: int) -> str:
    sign = "-" if c < 0 else ""
    c = abs(c)
    return f"{sign}{c // 100}.{c % 100:02d}"


@dataclass(frozen=True)
class EnergyModel:
    """Loop energy parameters, all in hundredths of a unit.

    ``stack`` and ``pk_stack`` are charged per adjacent arc pair of a stack,
    depending on whether the stack takes part in a crossing.
    """

    stack: int = -200
    pk_stack: int = -180
    hairpin: int = 300
    hairpin_slope: int = 10
    interior: int = 150
    interior_slope: int = 20
    M: int = 400
    P1: int = 100
    Q_mul: int = 20
    Q_pk: int = 30
    Q: int = 0
    P_pk: int = 500
    pairs: frozenset = frozenset(DEFAULT_PAIRS)

    def can_pair(self, a: str, b: str) -> bool:
        return a + b in self.pairs

    def H(self, size: int) -> int:
        return self.hairpin + self.hairpin_slope * size

    def I(self, unpaired: int) -> int:
        return self.interior + self.interior_slope * unpaired

    def multi(self, closing: int, unpaired: int) -> int:
        return self.M + self.P1 * closing + self.Q_mul * unpaired

    def pseudoknot(self, unpaired: int) -> int:
        return self.P_pk + self.Q_pk * unpaired

    def stack_term(self, length: int, crossing: bool) -> int:
        return (length - 1) * (self.pk_stack if crossing else self.stack)


_NUMERIC = [f.name for f in fields(EnergyModel) if f.name != "pairs"]


def parse_energy_config(text: str, base: EnergyModel | None = None) -> EnergyModel:
    """Read ``key = value`` lines; ``#`` starts a comment, unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "pairs":
            pairs = [p.strip().upper() for p in value.split(",") if p.strip()]
            if not pairs or any(len(p) != 2 or set(p) - ALPHABET for p in pairs):
                raise ConfigError(f"line {lineno}: bad pair list {value!r}")
            values[key] = frozenset(pairs)
        elif key in _NUMERIC:
            values[key] = to_cents(value)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    base = base or EnergyModel()
    return EnergyModel(**{**{f.name: getattr(base, f.name) for f in fields(EnergyModel)}, **values})


def format_energy_config(em: EnergyModel) -> str:
    lines = [f"{name} = {format_cents(getattr(em, name))}" for name in _NUMERIC]
    lines.append("pairs = " + ",".join(sorted(em.pairs)))
    return "\n".join(lines) + "\n"


def check_sequence(seq: str) -> str:
    seq = seq.strip().upper().replace("T", "U")
    bad = sorted(set(seq) - ALPHABET)
    if bad:
        raise InvalidAlphabet(f"unexpected symbols {''.join(bad)!r}")
    if not seq:
        raise InvalidAlphabet("empty sequence")
    return seq


def order(s: Structure) -> int:
    """Number of arcs not nested under any other arc."""
    outer = [st.outermost for st in s.stacks]
    return sum(1 for a in outer if not any(precedes(a, b) for b in outer))


def check_pairs(s: Structure, seq: str, em: EnergyModel) -> None:
    if len(seq) != s.n:
        raise InvalidParams(f"sequence length {len(seq)} differs from structure length {s.n}")
    for i, j in s.arcs:
        if not em.can_pair(seq[i - 1], seq[j - 1]):
            raise InadmissiblePair(f"{seq[i - 1]}{seq[j - 1]} at ({i},{j}) cannot pair")


def decomposition_cents(d: LoopDecomposition, em: EnergyModel) -> int:
    total = em.Q * d.exterior_unpaired
    for st in d.structure.stacks:
        total += em.stack_term(st.length, st in d.pk_stacks)
    for loop in d.loops:
        if loop.kind == HAIRPIN:
            total += em.H(loop.unpaired)
        elif loop.kind == INTERIOR:
            total += em.I(loop.unpaired)
        elif loop.kind == MULTI:
            total += em.multi(len(loop.closing) + len(loop.branches), loop.unpaired)
        elif loop.kind == PSEUDOKNOT:
            total += em.pseudoknot(loop.unpaired)
    return total


def energy_cents(s: Structure, seq: str, em: EnergyModel | None = None) -> int:
    em = em or EnergyModel()
    check_pairs(s, seq, em)
    return decomposition_cents(loop_decompose(s), em)


def loop_energy(s: Structure, seq: str, em: EnergyModel | None = None) -> float:
    return energy_cents(s, seq, em) / 100


_END = (float("inf"), float("inf"))


def tie_key(arcs) -> tuple:
    """Total order on equal-energy structures.

    Sorted arc lists are compared lexicographically with a terminal sentinel
    that sorts after every arc, so a list never wins merely by being a prefix
    of another. This makes the order independent of arcs outside a region,
    which is what lets the folding tables break ties locally.
    """
    return (*sorted(arcs), _END)

from __future__ import annotations

import itertools

import pytest

from crossfold.diagrams import Structure, core, new_structure, precedes
from crossfold.errors import InvalidParams, MalformedPath, NotAMotif
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


def brute_paths(n, k, sigma):
    """Every step string of length n passing the path conditions, by full product."""
    out = []
    for steps in itertools.product("UDH", repeat=n):
        p = MotzkinPath("".join(steps))
        if p.is_valid(k, sigma):
            out.append(p)
    return out


def lam_ok(p, sigma, lam=4):
    return all(j - i >= lam for i, j in path_arcs(p, sigma))


def test_count_base_cases():
    c = count_motifs(12, 3, 3)
    assert c.mu_star[:7] == (1,) * 7
    assert c.mu[:6] == (1,) * 6


def test_count_examples():
    assert count_motifs(6, 3, 3).mu_star[6] == 1
    assert count_motifs(9, 3, 3).mu_star[9] == 2
    assert count_motifs(12, 3, 3).mu_star[12] == 12


def test_count_against_step_product():
    # independent of the block-wise enumerator: full 3^n scan
    for n in range(0, 13):
        brute = sum(1 for p in brute_paths(n, 3, 3) if lam_ok(p, 3))
        assert brute == count_motifs(n, 3, 3).mu_star[n], n


def test_invalid_params():
    with pytest.raises(InvalidParams):
        count_motifs(5, 1, 3)
    with pytest.raises(InvalidParams):
        count_motifs(5, 3, 1)


def test_enumerate_small():
    assert [m.arcs for m in enumerate_motifs(8, 3, 3)] == [()]
    got = sorted(m.arcs for m in enumerate_motifs(9, 3, 3))
    assert got == [(), ((1, 9), (2, 8), (3, 7))]
    twelve = enumerate_motifs(12, 3, 3)
    assert len(twelve) == 12
    crossing = ((1, 9), (2, 8), (3, 7), (4, 12), (5, 11), (6, 10))
    assert crossing in {m.arcs for m in twelve}


def test_path_to_motif_examples():
    assert path_to_motif(MotzkinPath("HHHHH"), 3).arcs == ()
    assert path_to_motif(MotzkinPath("UUUHHHDDD"), 3).arcs == ((1, 9), (2, 8), (3, 7))
    two = path_to_motif(MotzkinPath("UUUUUUDDDDDD"), 3)
    assert two.arcs == ((1, 9), (2, 8), (3, 7), (4, 12), (5, 11), (6, 10))


def test_malformed_paths():
    with pytest.raises(MalformedPath):
        path_arcs(MotzkinPath("UUHDD"), 3)
    with pytest.raises(MalformedPath):
        path_arcs(MotzkinPath("DDDUUU"), 3)
    with pytest.raises(MalformedPath):
        path_arcs(MotzkinPath("UUUHHH"), 3)


def test_motif_to_path_examples():
    assert motif_to_path(new_structure(5, [])).steps == "HHHHH"
    assert motif_to_path(new_structure(9, [(1, 9), (2, 8), (3, 7)])).steps == "UUUHHHDDD"
    nested = new_structure(20, [(1, 20), (2, 19), (3, 18), (6, 15), (7, 14), (8, 13)])
    with pytest.raises(NotAMotif):
        motif_to_path(nested)
    long = new_structure(11, [(1, 11), (2, 10), (3, 9), (4, 8)])
    with pytest.raises(NotAMotif):
        motif_to_path(long)


@pytest.mark.parametrize("sigma", [3, 4, 5])
def test_enumeration_matches_recurrence(sigma):
    counts = count_motifs(20, 3, sigma).mu_star
    for n in range(21):
        assert len(enumerate_motifs(n, 3, sigma)) == counts[n], (n, sigma)


def test_round_trip_and_injectivity():
    for n in range(15):
        images = set()
        for p in enumerate_paths(n, 3, 3):
            m = path_to_motif(p, 3)
            assert motif_to_path(m, 3) == p
            images.add(m.arcs)
        assert len(images) == sum(1 for _ in enumerate_paths(n, 3, 3))


def test_enumerated_motifs_are_motifs():
    for sigma in (3, 4):
        for n in range(21):
            for m in enumerate_motifs(n, 3, sigma):
                assert all(st.length == sigma for st in m.stacks)
                c = core(m).structure.arcs
                assert not any(precedes(a, b) for a in c for b in c)
                assert all(a.length >= 4 for a in m.arcs)
                new_structure(m.n, m.arcs, 3, 4, sigma)


def test_literal_plateau_condition_differs():
    # U3 H2 U3 D3 D3 has a height-3 plateau of length 2 yet maps to a valid motif,
    # so a literal plateau rule would undercount relative to the recurrence
    p = MotzkinPath("UUUHHUUUDDDDDD")
    assert p.is_valid(3, 3)
    m = path_to_motif(p, 3)
    assert all(j - i >= 4 for i, j in m.arcs)
    assert m.arcs in {x.arcs for x in enumerate_motifs(14, 3, 3)}


@pytest.mark.parametrize("sigma, expected", [(2, 1.7424), (3, 1.5457), (5, 1.3721)])
def test_motif_growth_rate(sigma, expected):
    r = motif_growth_rate(sigma)
    assert abs(r.value - expected) <= 1e-3
    assert r.residual <= 1e-12


def test_motif_rate_monotone():
    rates = [motif_growth_rate(s).value for s in range(2, 10)]
    assert all(a > b for a, b in zip(rates, rates[1:]))


def test_motif_ratio_convergence():
    mu = count_motifs(61, 3, 3).mu_star
    assert abs(mu[61] / mu[60] - motif_growth_rate(3).value) / motif_growth_rate(3).value < 0.05


@pytest.mark.parametrize("k, sigma, expected", [(3, 3, 2.0348), (3, 4, 1.7898), (4, 3, 2.2644)])
def test_structure_growth_rate(k, sigma, expected):
    r = structure_growth_rate(k, sigma)
    assert abs(r.value - expected) <= 1e-3
    assert r.residual <= 1e-12


def test_structure_rate_params():
    with pytest.raises(InvalidParams):
        structure_growth_rate(2, 3)
    with pytest.raises(InvalidParams):
        motif_growth_rate(1)


def test_structure_type():
    assert isinstance(path_to_motif(MotzkinPath("H"), 3), Structure)

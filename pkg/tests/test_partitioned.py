import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FAN
from strategies import random_hosts
from uniform_turan.colorability import verify_certificate
from uniform_turan.constructions import FanChoice, fan_expansion, phi3_witness
from uniform_turan.core import PHI0, PHI3, PHI8, Hypergraph
from uniform_turan.errors import CapExceededError, MalformedInputError
from uniform_turan.partitioned import (
    PartitionedHypergraph,
    degree_profile,
    embed_from_skeleton,
    embed_search,
    extract_phi3_skeleton,
    find_uniform_profile_subset,
    min_density,
    palette_role_host,
    random_partitioned_from_palette,
    relative_degree,
    selector_search,
    significant_vertices,
    skeleton_holds,
    triad_density,
    triad_slot,
    verify_embedding,
)
from uniform_turan.rng import SeededRng


def brute_embed_exists(ph, guest):
    pairs = list(itertools.combinations(range(guest.n), 2))
    for indices in itertools.permutations(range(1, ph.N + 1), guest.n):
        for ws in itertools.product(range(ph.s), repeat=len(pairs)):
            from uniform_turan.partitioned import Embedding

            if verify_embedding(ph, guest, Embedding(indices, dict(zip(pairs, ws)))):
                return True
    return False


def test_validation():
    with pytest.raises(MalformedInputError):
        PartitionedHypergraph.from_edges(3, 2, [(1, 2, 4, 0, 0, 0)])
    with pytest.raises(MalformedInputError):
        PartitionedHypergraph.from_edges(3, 2, [(1, 2, 3, 0, 2, 0)])
    with pytest.raises(MalformedInputError):
        PartitionedHypergraph(3, 0)


def test_triad_slot():
    assert triad_slot((1, 2), 3) == ((1, 2, 3), 0)
    assert triad_slot((2, 3), 1) == ((1, 2, 3), 1)
    assert triad_slot((3, 1), 2) == ((1, 2, 3), 2)
    with pytest.raises(MalformedInputError):
        triad_slot((1, 2), 2)


@settings(max_examples=40, deadline=None)
@given(random_hosts())
def test_double_counting(ph):
    for t in ph.all_triads():
        i, j, k = t
        for part, toward in (((i, j), k), ((j, k), i), ((i, k), j)):
            total = sum(relative_degree(ph, part, v, toward) for v in range(ph.s))
            assert total * ph.s**2 == len(ph.triad(*t))
            assert total / ph.s == triad_density(ph, *t)


@settings(max_examples=40, deadline=None)
@given(random_hosts(), st.sampled_from([Fraction(1, 20), Fraction(1, 5), Fraction(1, 2)]))
def test_profile_matches_definition(ph, eps):
    prof = degree_profile(ph, eps)
    for (i, j, k), (a, b, c) in prof.items():
        direct = [
            Fraction(sum(relative_degree(ph, part, v, toward) >= eps for v in range(ph.s)), ph.s)
            for part, toward in (((i, j), k), ((j, k), i), ((i, k), j))
        ]
        assert [a, b, c] == direct


def test_palette_host_density():
    ph = random_partitioned_from_palette(PHI8, 4, 6, SeededRng(1))
    again = random_partitioned_from_palette(PHI8, 4, 6, SeededRng(1))
    assert ph == again
    role = palette_role_host(PHI8, 4)
    assert role.s == 3
    assert all(triad_density(role, *t) == Fraction(8, 27) for t in role.all_triads())
    assert min_density(palette_role_host(PHI0, 3)) == Fraction(1, 27)


def test_random_host_colors_drawn_part_by_part():
    rng = SeededRng(2)
    colors = {p: [rng.below(3) for _ in range(2)] for p in itertools.combinations(range(1, 4), 2)}
    ph = random_partitioned_from_palette(PHI0, 3, 2, SeededRng(2))
    expected = {
        (a, b, c)
        for a, b, c in itertools.product(range(2), repeat=3)
        if (colors[(1, 2)][a], colors[(2, 3)][b], colors[(1, 3)][c]) == (0, 1, 2)
    }
    assert set(ph.triad(1, 2, 3)) == expected


def test_profile_subset_modes():
    ph = palette_role_host(PHI8, 6)
    w = find_uniform_profile_subset(ph, Fraction(1, 10), 4)
    assert w.indices == (1, 2, 3, 4)
    g = find_uniform_profile_subset(ph, Fraction(1, 10), 4, mode="greedy")
    assert g.indices == (1, 2, 3, 4, 5, 6)
    assert (g.a, g.b, g.c) == (Fraction(2, 3),) * 3
    with pytest.raises(CapExceededError):
        find_uniform_profile_subset(palette_role_host(PHI0, 13), Fraction(1, 10), 3)


def test_selector_search_shapes():
    ph = palette_role_host(PHI0, 5)
    # Vertex 0 of every part has relative degree 1/9 toward larger indices in slot 0.
    fam = lambda i, j, k: significant_vertices(ph, (i, j, k), 0, Fraction(1, 9))  # noqa: E731
    sel = selector_search(ph, "ij", fam, 3)
    assert sel.indices == (1, 2, 3, 4, 5)
    assert all(sel.witnesses[p] == 0 for p in sel.witnesses if p[1] < 5)
    assert selector_search(ph, "ij", lambda i, j, k: [], 3) is None
    with pytest.raises(ValueError):
        selector_search(ph, "xx", fam, 3)


def test_role_host_skeleton():
    ph = palette_role_host(PHI3, 8)
    res = extract_phi3_skeleton(ph, Fraction(1, 5))
    assert res.success and res.skeleton.indices == tuple(range(1, 9))
    assert skeleton_holds(ph, res.skeleton)
    names = ("omega", "alpha1", "beta1", "alpha2", "gamma2", "beta3", "gamma3")
    # Interior pairs are forced to the vertex carrying the matching color.
    assert all(res.skeleton.vertex(name, 3, 5) == c for c, name in enumerate(names))
    assert res.surplus < 0


def test_skeleton_delta_threshold_on_role_host():
    # Role vertices have relative degree 1/49; significance needs 2 * delta / 20.
    ph = palette_role_host(PHI3, 6)
    assert extract_phi3_skeleton(ph, Fraction(10, 49)).success
    res = extract_phi3_skeleton(ph, Fraction(1, 2))
    assert not res.success and res.stage == "profile"


def test_skeleton_empty_and_complete_hosts():
    empty = PartitionedHypergraph(5, 2)
    res = extract_phi3_skeleton(empty, Fraction(1, 10))
    assert not res.success and res.stage == "profile"
    assert res.window is not None and (res.window.a, res.window.b, res.window.c) == (0, 0, 0)
    cells = list(itertools.product(range(2), repeat=3))
    full = PartitionedHypergraph.from_edges(
        5, 2, [t + c for t in itertools.combinations(range(1, 6), 3) for c in cells]
    )
    res = extract_phi3_skeleton(full, Fraction(1, 10))
    assert res.success and res.skeleton.indices == (1, 2, 3, 4, 5)
    with pytest.raises(MalformedInputError):
        extract_phi3_skeleton(PartitionedHypergraph(2, 2), Fraction(1, 10))


def test_skeleton_fails_on_sparse_host():
    res = extract_phi3_skeleton(palette_role_host(PHI0, 5), Fraction(1, 5))
    assert not res.success


def test_embed_from_skeleton_for_fan():
    ph = palette_role_host(PHI3, 8)
    skeleton = extract_phi3_skeleton(ph, Fraction(1, 5)).skeleton
    h5 = Hypergraph(5, 5, ((0, 1, 2, 3, 4),))
    choice = FanChoice(((1, 3),))
    fan, _ = fan_expansion(h5, choice)
    assert fan == FAN
    cert = phi3_witness(h5, choice)
    assert verify_certificate(fan, PHI3, cert)
    emb = embed_from_skeleton(skeleton, fan, cert)
    assert verify_embedding(ph, fan, emb)


def test_embed_search_on_role_host():
    ph = palette_role_host(PHI3, 8)
    emb = embed_search(ph, FAN)
    assert emb is not None and verify_embedding(ph, FAN, emb)
    # K4 is not Phi_0-colorable, so the Phi_0 role host cannot take it.
    from conftest import K4

    assert embed_search(palette_role_host(PHI0, 6), K4) is None
    assert embed_search(PartitionedHypergraph(4, 2), K4) is None
    single = Hypergraph(3, 3, ((0, 1, 2),))
    assert embed_search(PartitionedHypergraph.from_edges(3, 2, [(1, 2, 3, 1, 0, 1)]), single) is not None


@settings(max_examples=25, deadline=None)
@given(random_hosts(max_N=4, max_s=2), st.sampled_from([
    Hypergraph(3, 3, ((0, 1, 2),)),
    Hypergraph(3, 4, ((0, 1, 2), (0, 1, 3))),
    Hypergraph(3, 4, ((0, 1, 2), (1, 2, 3))),
    Hypergraph(3, 4, ((0, 1, 2), (0, 1, 3), (0, 2, 3))),
]))
def test_embed_search_matches_brute_force(ph, guest):
    emb = embed_search(ph, guest)
    assert (emb is not None) == brute_embed_exists(ph, guest)
    if emb is not None:
        assert verify_embedding(ph, guest, emb)


def test_verify_embedding_rejects():
    from uniform_turan.partitioned import Embedding

    ph = palette_role_host(PHI3, 4)
    g = Hypergraph(3, 3, ((0, 1, 2),))
    assert not verify_embedding(ph, g, Embedding((1, 1, 2), {(0, 1): 0, (0, 2): 0, (1, 2): 0}))
    assert not verify_embedding(ph, g, Embedding((1, 2, 3), {(0, 1): 0, (0, 2): 0}))
    # (c_12, c_23, c_13) = (alpha1, beta1, omega) is a Phi_3 triple.
    assert verify_embedding(ph, g, Embedding((1, 2, 3), {(0, 1): 1, (1, 2): 2, (0, 2): 0}))

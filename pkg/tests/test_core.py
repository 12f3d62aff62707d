import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pairwise_linear
from uniform_turan.core import (
    PHI0,
    PHI3,
    PHI8,
    ColoringCertificate,
    Hypergraph,
    Palette,
    as_fraction,
    canonicalize,
    complete_palette,
    covers_every_pair_once,
    is_linear,
)
from uniform_turan.errors import MalformedCertificateError, MalformedInputError


@st.composite
def raw_hypergraphs(draw, k=3, max_n=9):
    n = draw(st.integers(k, max_n))
    edge = st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True).map(tuple)
    edges = draw(st.lists(edge, max_size=15))
    return Hypergraph(k, n, tuple(edges))


def test_canonicalize_sorts_and_dedups():
    h = canonicalize(Hypergraph(3, 5, ((3, 1, 0), (0, 1, 3), (4, 2, 1))))
    assert h.edges == ((0, 1, 3), (1, 2, 4))
    assert h.is_canonical()


@pytest.mark.parametrize(
    "h",
    [
        Hypergraph(4, 5, ((0, 1, 2, 3),)),
        Hypergraph(3, 3, ((0, 1, 3),)),
        Hypergraph(3, 3, ((0, 1, 1),)),
        Hypergraph(3, 3, ((0, 1),)),
        Hypergraph(3, 3, ((-1, 0, 1),)),
    ],
)
def test_canonicalize_rejects(h):
    with pytest.raises(MalformedInputError):
        canonicalize(h)


@given(raw_hypergraphs())
def test_canonicalize_idempotent(h):
    c = canonicalize(h)
    assert canonicalize(c) == c
    assert c.is_canonical()
    assert set(c.edges) == {tuple(sorted(e)) for e in h.edges}


@given(raw_hypergraphs(), st.randoms(use_true_random=False))
def test_is_linear_matches_pairwise_and_relabel_invariant(h, rnd):
    c = canonicalize(h)
    perm = list(range(c.n))
    rnd.shuffle(perm)
    assert is_linear(c) == pairwise_linear(c.edges)
    assert is_linear(c.relabel(perm)) == is_linear(c)


def test_fano_like_design_covers_pairs():
    # Steiner triple system on 7 points.
    sts = Hypergraph(3, 7, ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)))
    assert is_linear(sts) and covers_every_pair_once(sts)
    assert not covers_every_pair_once(sts.restrict(sts.edges[:-1]))


def test_builtin_palettes():
    assert len(PHI0) == 1 and len(PHI3) == 3 and len(PHI8) == 8
    assert (1, 2, 0) in PHI3 and (3, 0, 4) in PHI3 and (0, 5, 6) in PHI3
    assert all(x in (1, 2) and y in (0, 2) and z in (0, 1) for x, y, z in PHI8.triples)
    assert len(complete_palette(2)) == 8


def test_palette_validation():
    with pytest.raises(MalformedInputError):
        Palette(3, frozenset({(0, 1, 3)}))
    with pytest.raises(MalformedInputError):
        Palette(4, frozenset({(0, 1, 2)}))
    Palette(2, frozenset())


def test_palette_lookup_table():
    for p in (PHI0, PHI3, PHI8):
        k = p.color_count
        for t in itertools.product(range(k), repeat=3):
            assert p.lookup[(t[0] * k + t[1]) * k + t[2]] == (t in p)


def test_certificate_validate():
    good = ColoringCertificate((2, 0, 1), {(0, 1): 0, (0, 2): 1, (1, 2): 2})
    good.validate(3, PHI0)
    assert good.position == (1, 2, 0)
    with pytest.raises(MalformedCertificateError):
        ColoringCertificate((0, 0, 1), good.pair_colors).validate(3)
    with pytest.raises(MalformedCertificateError):
        ColoringCertificate((0, 1, 2), {(0, 1): 0, (0, 2): 1}).validate(3)
    with pytest.raises(MalformedCertificateError):
        ColoringCertificate((0, 1, 2), {(0, 1): 0, (0, 2): 1, (1, 2): 5}).validate(3, PHI0)


def test_as_fraction_is_exact_for_decimal_floats():
    assert as_fraction(0.3) == Fraction(3, 10)
    assert as_fraction("1/20") == Fraction(1, 20)
    assert as_fraction(2) == 2

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import graphs, random_letters

from gbs.errors import MalformedWordError
from gbs.graphs import bs_graph, graph_from_edges, lollipop_graph, segment_graph
from gbs.words import (
    PathWord,
    Presentation,
    britton_reduce,
    equal,
    has_nontrivial_center,
    is_elliptic,
    is_unimodular,
    letters_concat,
    letters_inverse,
    modular_image,
    modulus,
    parse_letters,
    format_letters,
    segment_center_index,
)


def _relator_word(g, pres):
    rels = pres.relations()
    return rels


def test_bs_relator_trivial():
    g = bs_graph(2, 3)
    pres = Presentation(g)
    for rel in pres.relations():
        assert britton_reduce(g, pres.letters_to_path(rel)).trivial


def test_classic_nonhopf_witness_words():
    g = bs_graph(2, 3)
    pres = Presentation(g)
    w = letters_concat(
        (("t", "e0", 1), ("v", "v0", 1), ("t", "e0", -1), ("v", "v0", 1)),
        (("t", "e0", 1), ("v", "v0", -1), ("t", "e0", -1), ("v", "v0", -1)),
    )
    assert not britton_reduce(g, pres.letters_to_path(w)).trivial


def test_lollipop_relation_a_power_equals_b_power():
    g = lollipop_graph([6, 16], [3, 6])  # Q=6, R=2^4
    pres = Presentation(g, frozenset({"s0"}))
    lhs = pres.letters_to_path((("v", "v0", 6),))
    rhs = pres.letters_to_path((("v", "w0", 16),))
    assert equal(g, lhs, rhs)
    assert not equal(g, pres.letters_to_path((("v", "v0", 1),)), pres.letters_to_path((("v", "v0", 2),)))


def test_malformed_words():
    g = bs_graph(2, 3)
    with pytest.raises(MalformedWordError):
        britton_reduce(g, PathWord("v0", (("e", "nope", 0),)))
    g2seg = segment_graph([2, 3])
    with pytest.raises(MalformedWordError):
        # a single traversal is not a loop on a segment
        britton_reduce(g2seg, PathWord("v0", (("e", "s0", 0),)))
    with pytest.raises(MalformedWordError):
        britton_reduce(g2seg, PathWord("v0", (("v", "v1", 2),)))
    # base mismatch across multiplication
    g2 = segment_graph([2, 3])
    p0 = Presentation(g2, base="v0")
    p1 = Presentation(g2, base="v1")
    with pytest.raises(MalformedWordError):
        _ = p0.letters_to_path((("v", "v0", 1),)) * p1.letters_to_path((("v", "v1", 1),))


def test_modulus_examples():
    g = bs_graph(4, 6)
    pres = Presentation(g)
    assert modulus(g, pres.letters_to_path((("t", "e0", 1),))) == Fraction(2, 3)
    assert modulus(g, pres.letters_to_path((("v", "v0", 5),))) == 1
    gp = lollipop_graph([6, 2], [3, 6])
    presp = Presentation(gp, frozenset({"s0"}))
    assert modulus(gp, presp.letters_to_path((("t", "c0", 1),))) == Fraction(1, 2)


def test_elliptic_examples():
    g = bs_graph(2, 3)
    pres = Presentation(g)
    assert is_elliptic(g, pres.letters_to_path((("v", "v0", 5),)))
    assert not is_elliptic(g, pres.letters_to_path((("t", "e0", 1),)))
    conj = pres.letters_to_path(
        (("t", "e0", 1), ("v", "v0", 1), ("t", "e0", -1))
    )
    assert is_elliptic(g, conj)
    assert not is_elliptic(
        g, pres.letters_to_path((("t", "e0", 2), ("v", "v0", 1), ("t", "e0", -1)))
    )


def test_modular_image_examples():
    assert modular_image(segment_graph([2, 3])).is_trivial()
    assert modular_image(bs_graph(2, 4)).contains(Fraction(1, 2))
    g = graph_from_edges([("e0", "u", "w", 2, 2), ("e1", "w", "w", 1, -1)])
    img = modular_image(g)
    assert img.contains(Fraction(-1)) and img.is_subgroup_of_pm1()
    assert is_unimodular(g)


def test_unimodular_center():
    assert is_unimodular(bs_graph(3, 3)) and has_nontrivial_center(bs_graph(3, 3))
    assert not is_unimodular(bs_graph(2, 4))
    assert is_unimodular(bs_graph(2, -2)) and not has_nontrivial_center(bs_graph(2, -2))


def test_letters_round_trip_and_parse():
    g = lollipop_graph([6, 2], [3, 6])
    pres = Presentation(g, frozenset({"s0"}))
    letters = parse_letters("a(v0)^2 t(c0)^-1 a(w0)")
    path = pres.letters_to_path(letters)
    back = pres.path_to_letters(path)
    assert equal(g, path, pres.letters_to_path(back))
    assert parse_letters(format_letters(letters)) == letters


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_britton_soundness_random(g):
    rng = random.Random(17)
    pres = Presentation(g)
    rels = pres.relations()
    if not rels:
        return
    word = ()
    for _ in range(3):
        rel = rng.choice(rels)
        conj = random_letters(rng, pres, length=2)
        if rng.random() < 0.5:
            rel = letters_inverse(rel)
        word = letters_concat(word, conj, rel, letters_inverse(conj))
    assert britton_reduce(g, pres.letters_to_path(word)).trivial


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_britton_confluence_triviality(g):
    """Reducing with the reversed syllable order preserves triviality and
    the traversal count."""
    rng = random.Random(23)
    pres = Presentation(g)
    w = pres.letters_to_path(random_letters(rng, pres, length=5))
    nf = britton_reduce(g, w)
    rev = britton_reduce(g, w.inverse())
    assert nf.trivial == rev.trivial
    assert nf.word.traversal_count == rev.word.traversal_count


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_modulus_homomorphism(g):
    rng = random.Random(5)
    pres = Presentation(g)
    w1 = pres.letters_to_path(random_letters(rng, pres))
    w2 = pres.letters_to_path(random_letters(rng, pres))
    assert modulus(g, w1 * w2) == modulus(g, w1) * modulus(g, w2)


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_elliptic_implies_modulus_one(g):
    rng = random.Random(7)
    pres = Presentation(g)
    w = pres.letters_to_path(random_letters(rng, pres))
    if is_elliptic(g, w):
        assert modulus(g, w) == 1


# -- gcd-chain center index ----------------------------------------------------


def _center_index_oracle(r0, q, r):
    """Minimal N >= 1 such that a_0^(r0 N) transports along the whole chain."""
    bound = 1
    for v in q:
        bound *= abs(v)
    for N in range(1, bound + 1):
        x = r0 * N
        ok = True
        for j in range(len(q)):
            if x % q[j]:
                ok = False
                break
            x = (x // q[j]) * r[j]
        if ok:
            return N
    raise AssertionError("oracle found no index within the guaranteed bound")


def test_center_index_examples():
    assert segment_center_index(4, [6], [10]) == 3  # q0 / gcd(r0, q0)
    assert segment_center_index(1, [2, 3], [5, 7]) == 6  # coprime: product of q
    assert segment_center_index(1, [2], [3]) == 2


def test_center_index_against_oracle(rng):
    for _ in range(300):
        k = rng.randint(1, 5)
        q = [rng.choice([1, -1]) * rng.randint(1, 20) for _ in range(k)]
        r = [rng.choice([1, -1]) * rng.randint(1, 20) for _ in range(k)]
        r0 = rng.choice([1, -1]) * rng.randint(1, 20)
        assert segment_center_index(r0, q, r) == _center_index_oracle(r0, q, r)


def test_center_index_power_assertion():
    # all labels exactly divisible by p^alpha, r0 = 1: same for N
    p, alpha = 2, 2
    q = [p**alpha * u for u in (3, 5)]
    r = [p**alpha * u for u in (7, 9)]
    n = segment_center_index(1, q, r)
    assert n % p**alpha == 0 and n % p ** (alpha + 1) != 0


def test_center_index_matches_group_membership():
    # wt2(1): a_0^(q0 q1) = a_2^(r1 r2) holds in the group
    g = segment_graph([4, 6, 9, 10])
    pres = Presentation(g)
    lhs = pres.letters_to_path((("v", "v0", 4 * 9),))
    rhs = pres.letters_to_path((("v", "v2", 6 * 10),))
    assert equal(g, lhs, rhs)


def test_britton_against_affine_oracle(rng):
    """Over the solvable loop (1, n) the group acts faithfully by exact
    affine maps x -> alpha x + beta: an independent word-problem oracle."""
    for n in (2, 3, -2, 5):
        g = bs_graph(1, n)
        pres = Presentation(g)
        for _ in range(200):
            letters = random_letters(rng, pres, length=5, max_exp=3)
            # accumulate f(x) = alpha x + beta, appending letters on the right:
            # a^e maps x to x + e, t^e scales by n^e (t a t^-1 = a^n)
            alpha, beta = Fraction(1), Fraction(0)
            for kind, name, exp in letters:
                if kind == "v":
                    beta += alpha * exp
                else:
                    alpha *= Fraction(n) ** exp
            trivial = britton_reduce(g, pres.letters_to_path(letters)).trivial
            assert trivial == (alpha == 1 and beta == 0), (n, letters)


def test_moves_preserve_group_invariants(rng):
    """Collapses and sign changes keep the modular image and its flags."""
    from conftest import small_connected_graph
    from gbs.graphs import reduce_graph, sign_change

    for _ in range(30):
        g = small_connected_graph(rng, max_vertices=4, max_label=6)
        red, _ = reduce_graph(g)
        before, after = modular_image(g), modular_image(red)
        assert before == after
        assert is_unimodular(g) == is_unimodular(red)
        flipped, _ = sign_change(g, vertex=g.sorted_vertices()[0])
        assert modular_image(flipped) == before


def test_transport_identity_random_segments(rng):
    # a_0^(q_0...q_{j-1}) = a_j^(r_1...r_j) along random segments
    for _ in range(40):
        k = rng.randint(1, 4)
        labels = []
        for _ in range(k):
            labels.append(rng.choice([1, -1]) * rng.randint(1, 9))
            labels.append(rng.choice([1, -1]) * rng.randint(1, 9))
        g = segment_graph(labels)
        pres = Presentation(g)
        q = labels[0::2]
        r = labels[1::2]
        for j in range(1, k + 1):
            qprod = 1
            rprod = 1
            for i in range(j):
                qprod *= q[i]
                rprod *= r[i]
            lhs = pres.letters_to_path((("v", "v0", qprod),))
            rhs = pres.letters_to_path((("v", f"v{j}", rprod),))
            assert equal(g, lhs, rhs)

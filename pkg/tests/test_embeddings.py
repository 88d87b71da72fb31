import json
import random

import pytest

from gbs.decision import Decision
from gbs.errors import DecisionError
from gbs.graphs import (
    bs_graph,
    circle_graph,
    graph_from_edges,
    segment_graph,
)
from gbs.embeddings import (
    EmbeddingCertificate,
    WeaklyAdmissibleMap,
    check_admissible,
    check_weakly_admissible,
    circle_bs_subgroup,
    contains_bs,
    contains_z2_k,
    embed_bs_construct,
    embeds_in_some_bs_nn,
    subgroup_of_bs_nn,
    verify_embedding_certificate,
)


def identity_map(g):
    return WeaklyAdmissibleMap(
        g,
        g,
        {v: v for v in g.vertices},
        {(e, k): (e, k) for e in g.edges for k in (0, 1)},
        {v: 1 for v in g.vertices},
        {e: 1 for e in g.edges},
    )


def test_identity_weakly_admissible():
    g = circle_graph([2, 3, 5, 7])
    ok, violations = check_weakly_admissible(identity_map(g))
    assert ok and not violations
    assert check_admissible(identity_map(g))


def test_checker_reports_violations():
    g = bs_graph(2, 3)
    wa = identity_map(g)
    wa.vertex_mult["v0"] = 0
    ok, violations = check_weakly_admissible(wa)
    assert not ok and any("positive" in v for v in violations)


def test_trg_construction():
    g = circle_graph([2, 5, 3, 7])  # X = 6, Y = 35
    cert = circle_bs_subgroup(g, 6, 35)
    ok, violations = verify_embedding_certificate(cert)
    assert ok, violations
    assert not check_admissible(cert.map)
    assert len(cert.map.source.edges) == 3 * 2


def test_trg_single_loop():
    cert = circle_bs_subgroup(bs_graph(2, 3), 2, 3)
    ok, _ = verify_embedding_certificate(cert)
    assert ok


def test_trg_longer_circle():
    from gbs.graphs import classify_shape, qrxy

    g = circle_graph([2, 3, 5, 7, 4, 11])  # products 40 and 231: coprime
    prods = qrxy(classify_shape(g))  # base and direction follow the convention
    cert = circle_bs_subgroup(g, prods.X, prods.Y)
    ok, violations = verify_embedding_certificate(cert)
    assert ok, violations


def test_trg_preconditions():
    with pytest.raises(DecisionError):
        circle_bs_subgroup(circle_graph([2, 2, 3, 5]), 6, 10)  # gcd != 1
    with pytest.raises(DecisionError):
        circle_bs_subgroup(circle_graph([2, 3, 5, 7]), 2, 3)  # wrong X, Y


def _mutations(cert, rng, count):
    """Single-field mutations of a weakly admissible map."""
    out = []
    wa = cert.map
    for _ in range(count):
        kind = rng.choice(["vmult", "emult", "label", "flip"])
        vm = dict(wa.vertex_mult)
        em = dict(wa.edge_mult)
        emap = dict(wa.edge_map)
        source = wa.source
        if kind == "vmult":
            v = rng.choice(sorted(vm))
            vm[v] += rng.randint(1, 3)
        elif kind == "emult":
            e = rng.choice(sorted(em))
            em[e] += rng.randint(1, 3)
        elif kind == "label":
            from gbs.graphs import EdgeData, LabelledGraph

            e = rng.choice(source.sorted_edges())
            k = rng.randint(0, 1)
            ed = source.edges[e]
            labels = list(ed.labels)
            labels[k] += 1 if labels[k] != -1 else 2
            edges = dict(source.edges)
            edges[e] = EdgeData(ed.endpoints, tuple(labels))
            source = LabelledGraph(source.vertices, edges)
        else:
            e = rng.choice(sorted(wa.source.edges))
            emap[(e, 0)], emap[(e, 1)] = emap[(e, 1)], emap[(e, 0)]
        out.append(
            WeaklyAdmissibleMap(source, wa.target, dict(wa.vertex_map), emap, vm, em)
        )
    return out


def test_mutations_always_caught():
    rng = random.Random(42)
    three_block = circle_bs_subgroup(circle_graph([2, 5, 3, 7]), 6, 35)
    power = embed_bs_construct(4, 8, 2, 4)
    for cert in (three_block, power):
        for mutant in _mutations(cert, rng, 100):
            ok, violations = check_weakly_admissible(mutant)
            assert not ok and violations


def test_admissible_implies_weak(rng):
    g = bs_graph(2, 3)
    wa = identity_map(g)
    assert check_admissible(wa)
    ok, _ = check_weakly_admissible(wa)
    assert ok


def test_contains_bs():
    assert contains_bs(bs_graph(2, 4), 1, 2)
    assert contains_bs(bs_graph(2, 3), 4, 9)
    assert not contains_bs(bs_graph(3, 3), 2, 3)
    assert contains_bs(circle_graph([2, 3, 5, 7]), 10, 21)
    with pytest.raises(DecisionError):
        contains_bs(bs_graph(2, 3), 2, 2)
    with pytest.raises(DecisionError):
        contains_bs(bs_graph(2, 3), 4, 6)


def test_embed_construct_examples():
    for r, s, m, n in ((4, 9, 2, 3), (4, 8, 2, 4), (2, 2, 2, 2), (8, 27, 6, 9), (3, 9, 2, 6)):
        cert = embed_bs_construct(r, s, m, n)
        ok, violations = verify_embedding_certificate(cert)
        assert ok, (r, s, m, n, violations)
    with pytest.raises(DecisionError):
        embed_bs_construct(12, 20, 6, 10)


def test_embedding_cert_json_round_trip():
    cert = embed_bs_construct(3, 9, 2, 6)  # pendant + index record route
    data = json.loads(json.dumps(cert.to_json()))
    back = EmbeddingCertificate.from_json(data)
    ok, violations = verify_embedding_certificate(back)
    assert ok, violations
    assert back.aug_records == cert.aug_records


def test_tampered_certificate_fails():
    cert = embed_bs_construct(4, 9, 2, 3)
    data = cert.to_json()
    key = sorted(data["map"]["vertex_mult"])[1]
    data["map"]["vertex_mult"][key] += 1
    bad = EmbeddingCertificate.from_json(data)
    ok, violations = verify_embedding_certificate(bad)
    assert not ok and violations
    data2 = cert.to_json()
    data2["map_claimed"] = [5, 7]
    bad2 = EmbeddingCertificate.from_json(data2)
    ok2, violations2 = verify_embedding_certificate(bad2)
    assert not ok2


def test_subgroup_of_bs_nn():
    four_n = graph_from_edges([("e0", "v", "v", 6, 6), ("e1", "v", "v", 6, 6)])
    assert subgroup_of_bs_nn(four_n, 6)
    assert subgroup_of_bs_nn(four_n, 12)
    assert not subgroup_of_bs_nn(four_n, 4)
    assert not subgroup_of_bs_nn(bs_graph(2, 3), 6)
    assert subgroup_of_bs_nn(segment_graph([2, 2]), 6)
    assert subgroup_of_bs_nn(bs_graph(3, -3), 6, up_to_sign=True)
    assert not subgroup_of_bs_nn(bs_graph(3, -3), 6)
    with pytest.raises(DecisionError):
        subgroup_of_bs_nn(four_n, 1)


def test_subgroup_of_bs_nn_divisibility_monotone(rng):
    graphs_pool = [
        graph_from_edges([("e0", "v", "v", 3, 3), ("e1", "v", "v", 3, 3)]),
        segment_graph([2, 2]),
        graph_from_edges([("e0", "u", "w", 2, 2), ("e1", "w", "x", 2, 2)]),
    ]
    for g in graphs_pool:
        for n in range(2, 13):
            if subgroup_of_bs_nn(g, n):
                for k in range(2, 5):
                    assert subgroup_of_bs_nn(g, k * n)


def test_embeds_in_some_bs_nn():
    four_n = graph_from_edges([("e0", "v", "v", 6, 6), ("e1", "v", "v", 6, 6)])
    assert embeds_in_some_bs_nn(four_n) == 6
    # one edge, labels 2 and 3: per-vertex equality holds, lcm is 6
    assert embeds_in_some_bs_nn(segment_graph([2, 3])) == 6
    assert embeds_in_some_bs_nn(bs_graph(2, 3)) is None
    assert embeds_in_some_bs_nn(bs_graph(1, 1)) == 2


def test_contains_z2_k():
    z2, k = contains_z2_k(bs_graph(1, 5))
    assert not z2 and not k
    z2, k = contains_z2_k(bs_graph(4, -4))
    assert z2 and k
    z2, k = contains_z2_k(segment_graph([2, 3]))
    assert z2 and k
    z2, k = contains_z2_k(segment_graph([3, 5]))
    assert z2 and not k and k.caveat
    z2, k = contains_z2_k(bs_graph(1, -1))
    assert z2 and k
    z2, k = contains_z2_k(bs_graph(1, 1))
    assert z2 and not k


def test_embeds_decider_agrees_with_modulus_decider():
    """For coprime r, s with r != +-s, the three-condition test and the
    lattice-membership test are independent implementations of the same
    subgroup question on loops."""
    from fractions import Fraction

    from gbs.arith import gcd as _gcd
    from gbs.bs_arith import embeds_bs
    from gbs.words import modular_image

    grid = [i for i in range(-7, 8) if i != 0]
    checked = 0
    for m in grid:
        for n in grid:
            if abs(m) == 1 and abs(n) == 1:
                continue
            image = modular_image(bs_graph(m, n))
            for r in grid:
                for s in grid:
                    if _gcd(r, s) != 1 or abs(r) == abs(s):
                        continue
                    a = bool(embeds_bs(r, s, m, n))
                    b = image.contains(Fraction(r, s))
                    assert a == b, (r, s, m, n)
                    checked += 1
    assert checked > 10000


def test_circle_subgroup_matches_modulus_reasoning():
    # a circle with X = m, Y = n coprime contains BS(m, n)
    g = circle_graph([2, 3, 5, 7])
    cert = circle_bs_subgroup(g, 10, 21)
    ok, _ = verify_embedding_certificate(cert)
    assert ok
    assert contains_bs(g, 10, 21)

import json
import random

import pytest
from hypothesis import given, settings

from conftest import graphs

from gbs.errors import DecisionError, MissingWitnessError
from gbs.graphs import (
    OrientedEdge,
    bs_graph,
    circle_graph,
    graph_from_edges,
    lollipop_graph,
    segment_graph,
)
from gbs.homs import (
    HomCertificate,
    bs_epi_cert,
    check_epi,
    check_hom,
    collapse_cert,
    compose,
    contraction_cert,
    displacement_cert,
    expansion_cert,
    identity_cert,
    images_of_elliptics_are_elliptic,
    loop_relabel_cert,
    non_hopf_endo,
    preserves_moduli,
    circle_minimal_epi,
    reduce_cert,
    sign_change_cert,
    solve_witnesses,
    bs_source_epi,
    minimal_bs_epi,
    tree_containing,
)
from gbs.words import Presentation, britton_reduce, letters_concat


def _round_trip_fixes_generators(fwd, rev):
    both = compose(fwd, rev)
    src = both.source
    for gen in src.generators():
        target_gen = ((gen[0], gen[1], 1),)
        diff = letters_concat(both.images[gen], tuple((k, n, -e) for k, n, e in target_gen))
        assert britton_reduce(src.graph, src.letters_to_path(diff)).trivial


def test_identity_cert():
    pres = Presentation(bs_graph(2, 3))
    cert = identity_cert(pres)
    assert check_hom(cert) and check_epi(cert)


def test_collapse_cert_round_trip():
    g = graph_from_edges(
        [("mid", "v", "w", 5, 1), ("g1", "w", "a", 3, 11), ("g2", "w", "w", 7, 13)]
    )
    g2, fwd, rev = collapse_cert(g, "mid")
    assert check_epi(fwd) and check_epi(rev)
    _round_trip_fixes_generators(fwd, rev)
    _round_trip_fixes_generators(rev, fwd)


def test_expansion_cert_round_trip():
    g = graph_from_edges([("e", "v", "w", 6, 10), ("f", "v", "v", 9, 12)])
    g2, fwd, rev = expansion_cert(g, "v", [OrientedEdge("e", 0), OrientedEdge("f", 1)], 3)
    assert check_epi(fwd) and check_epi(rev)
    _round_trip_fixes_generators(fwd, rev)


def test_sign_change_cert():
    g = segment_graph([2, 3])
    g2, fwd, rev = sign_change_cert(g, vertex="v1")
    assert check_epi(fwd) and check_epi(rev)
    _round_trip_fixes_generators(fwd, rev)
    g3, fwd2, rev2 = sign_change_cert(g, edge="s0")
    assert check_epi(fwd2) and check_epi(rev2)


def test_contraction_cert_two_edge_circle():
    # the two contractions of <a,b,t | a^3=b^3, t b^2 t^-1 = a^4>
    g = graph_from_edges([("e1", "u", "w", 3, 3), ("e2", "w", "u", 2, 4)])
    g1, c1 = contraction_cert(g, "e1")
    assert sorted(map(abs, g1.labels())) == [2, 4]
    assert check_epi(c1)
    g2, c2 = contraction_cert(g, "e2")
    assert sorted(map(abs, g2.labels())) == [3, 6]
    assert check_epi(c2)


def test_contraction_cert_bezout_witness():
    g = graph_from_edges([("eps", "v", "w", 6, 10), ("lp", "v", "v", 7, 11)])
    g2, cert = contraction_cert(g, "eps")
    assert check_epi(cert)


def test_displacement_cert():
    g = circle_graph([2, 5, 3, 7])
    g2, cert, new_edge = displacement_cert(g, "c1", 3, 0)
    assert check_hom(cert) and check_epi(cert)
    assert new_edge in g2.edges


def test_reduce_cert():
    g = circle_graph([2, 1, 3, 1, 5, 7])
    red, cert = reduce_cert(g)
    assert red.is_reduced()
    assert check_epi(cert)


def test_loop_relabel_variants():
    for labels, target in (((2, 3), (2, 3)), ((3, 2), (2, 3)), ((-2, -3), (2, 3)), ((-3, -2), (2, 3))):
        g = graph_from_edges([("z", "p", "p", *labels)])
        cert = loop_relabel_cert(g, *target)
        assert check_epi(cert), (labels, target)


def test_compose_is_functorial():
    g = circle_graph([2, 1, 3, 5])
    red, cert = reduce_cert(g)
    rel = loop_relabel_cert(red, *red.edges[red.sorted_edges()[0]].labels)
    both = compose(cert, rel)
    assert check_epi(both)


def test_missing_witness_error():
    pres = Presentation(bs_graph(2, 3))
    cert = identity_cert(pres)
    cert.witnesses = None
    with pytest.raises(MissingWitnessError):
        check_epi(cert)
    cert2 = identity_cert(pres)
    del cert2.witnesses[("t", "e0")]
    with pytest.raises(MissingWitnessError):
        check_epi(cert2)


def test_check_hom_rejects_bad_images():
    pres = Presentation(bs_graph(2, 3))
    bad = HomCertificate(
        pres,
        pres,
        {("v", "v0"): (("v", "v0", 1),), ("t", "e0"): (("v", "v0", 1),)},
        None,
        "broken",
    )
    assert not check_hom(bad)


def test_bs_epi_cert_cases():
    for args in ((18, 36, 9, 18), (6, 10, 3, 5), (6, 10, 5, 3), (4, 4, 1, -1), (12, 18, -2, -3)):
        cert = bs_epi_cert(*args)
        assert check_epi(cert), args
    with pytest.raises(DecisionError):
        bs_epi_cert(2, 3, 3, 5)


def test_non_hopf_pipeline():
    res = non_hopf_endo(2, 3)
    pres = res.cert.source
    assert check_epi(res.cert)
    assert not britton_reduce(pres.graph, pres.letters_to_path(res.kernel_witness)).trivial
    image = res.cert.image_of(res.kernel_witness)
    assert britton_reduce(pres.graph, pres.letters_to_path(image)).trivial
    assert non_hopf_endo(2, 9).params == (2, 9)
    assert non_hopf_endo(4, 6).params == (6, 4)
    with pytest.raises(DecisionError):
        non_hopf_endo(2, 4)


def test_bs_source_epi_multiples():
    g = lollipop_graph([6, 2], [3, 6])  # (QX, QY) = (18, 36)
    for m, n in ((18, 36), (36, 72), (-18, -36), (36, 18), (72, 36)):
        cert = bs_source_epi(g, m, n)
        assert check_epi(cert), (m, n)
    with pytest.raises(DecisionError):
        bs_source_epi(g, 18, 35)


def test_bs_source_epi_segment_routes():
    g = segment_graph([2, 3])
    assert check_epi(bs_source_epi(g, 2, 2))
    assert check_epi(bs_source_epi(g, 3, 3))
    assert check_epi(bs_source_epi(g, -6, -6))


def test_minimal_bs_epi_all_routes():
    cases = [
        lollipop_graph([2, 5], [5, 7]),  # explicit formula route
        lollipop_graph([2, 9], [3, 25]),  # explicit with alpha > 0
        lollipop_graph([3, 5], [6, 10]),  # contraction + split-index route
        lollipop_graph([2, 3, 5, 7], [21, 13]),  # k > 1 recursion
        circle_graph([2, 3, 5, 7]),  # displacement route
        bs_graph(2, 3),  # trivial relabel
    ]
    for g in cases:
        cert = minimal_bs_epi(g)
        assert check_epi(cert), g
    with pytest.raises(DecisionError):
        minimal_bs_epi(lollipop_graph([6, 2], [3, 6]))  # all gcd clauses fail


def test_circle_minimal_epi_matches_decider():
    from gbs.quotients import maps_onto_minimal_bs

    g = circle_graph([2, 3, 5, 7])
    assert maps_onto_minimal_bs(g).answer
    assert check_epi(circle_minimal_epi(g))


def test_checker_structural_properties():
    # elliptic generators map to elliptics; moduli are preserved
    certs = [
        bs_source_epi(lollipop_graph([6, 2], [3, 6]), 18, 36),
        minimal_bs_epi(lollipop_graph([2, 5], [5, 7])),
        non_hopf_endo(2, 3).cert,
    ]
    for cert in certs:
        assert images_of_elliptics_are_elliptic(cert)
        assert preserves_moduli(cert)


def test_solve_witnesses_degrades():
    # an image pair that generates a proper subgroup yields no witnesses
    pres = Presentation(bs_graph(2, 4))
    seeds = [((("v", "v0", 1),), (("v", "v0", 2),))]
    assert solve_witnesses(pres, seeds, {"e0": (("t", "e0", 1),)}) is None


def test_tree_containing():
    g = lollipop_graph([2, 3, 5, 7], [11, 13])
    tree = tree_containing(g, "s1")
    assert "s1" in tree and len(tree) == len(g.vertices) - 1


def test_hom_cert_json_round_trip():
    cert = bs_source_epi(lollipop_graph([6, 2], [3, 6]), 18, 36)
    data = json.loads(json.dumps(cert.to_json()))
    back = HomCertificate.from_json(data)
    assert check_epi(back)


def test_move_cert_json_round_trips():
    g = graph_from_edges([("eps", "v", "w", 6, 10), ("lp", "v", "v", 7, 11)])
    _, c_con = contraction_cert(g, "eps")
    g2 = circle_graph([2, 3, 5, 7])
    c_min = minimal_bs_epi(g2)
    for cert in (c_con, c_min):
        back = HomCertificate.from_json(json.loads(json.dumps(cert.to_json())))
        assert check_epi(back)


def test_structural_invariants_on_family_and_move_certs():
    from gbs.quotients import descending_chain, infinite_family

    certs = [descending_chain(2).to_bs_9_18]
    certs += [mem.cert for mem in infinite_family(4, 6, count=2)]
    g = graph_from_edges([("eps", "v", "w", 6, 10), ("lp", "v", "v", 7, 11)])
    certs.append(contraction_cert(g, "eps")[1])
    for cert in certs:
        assert images_of_elliptics_are_elliptic(cert)
        assert preserves_moduli(cert)


def test_source_then_minimal_composes():
    # BS(QX,QY) ->> G ->> BS(QX,QY): the composite is a checkable self-epi
    g = lollipop_graph([2, 5], [5, 7])
    down = bs_source_epi(g, 10, 14)
    up = minimal_bs_epi(g)
    both = compose(down, up)
    assert check_epi(both)


@given(graphs(max_label=7))
@settings(max_examples=25, deadline=None)
def test_reduce_cert_random(g):
    red, cert = reduce_cert(g)
    assert check_epi(cert)

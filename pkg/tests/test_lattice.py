import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wilsonloops.canonical import PlaquetteAssignment, height_assignment
from wilsonloops.engine import coefficient
from wilsonloops.lattice import (
    NULL_LOOP,
    LoopError,
    NonAdjacentStep,
    NotClosed,
    Loop,
    OrientedEdge,
    Plaquette,
    canonical_key,
    dihedral_images,
    edge_multiplicities,
    load_loop,
    parse_loop,
    plaquette_loop,
    plaquettes_containing,
    rectangle,
    remove_backtracks,
    unoriented_multiplicities,
    wind,
)

from conftest import closed_loops


# -- edges and plaquettes ------------------------------------------------------


def test_edge_basics():
    e = OrientedEdge(2, 3, "U")
    assert e.tail == (2, 3) and e.head == (2, 4)
    assert e.inverse() == OrientedEdge(2, 4, "D")
    assert e.inverse().inverse() == e
    assert e.positive and not e.inverse().positive
    assert e.inverse().unoriented() == e


def test_positive_plaquette_has_upward_left_edge():
    p = Plaquette(0, 0, 1)
    assert p.edges()[0] == OrientedEdge(0, 0, "U")
    assert [e.dir for e in p.edges()] == list("URDL")
    assert [e.dir for e in p.inverse().edges()] == list("RULD")


@pytest.mark.parametrize("d", "URDL")
def test_plaquettes_containing(d):
    e = OrientedEdge(3, -1, d)
    pos, neg = plaquettes_containing(e)
    assert pos.sign == 1 and neg.sign == -1
    assert e in pos.edges() and e in neg.edges()
    # the inverse edge lies on the inverse plaquettes
    assert {p.inverse() for p in plaquettes_containing(e.inverse())} == {pos, neg}


def test_path_after():
    p = Plaquette(0, 0, 1)
    assert p.path_after(OrientedEdge(0, 0, "U")) == "RDL"
    assert p.path_after(OrientedEdge(1, 1, "D")) == "LUR"
    with pytest.raises(ValueError):
        p.path_after(OrientedEdge(5, 5, "U"))


# -- loops -----------------------------------------------------------------------


def test_loop_validation():
    with pytest.raises(NotClosed):
        Loop((0, 0), "URD")
    with pytest.raises(LoopError):
        Loop((0, 0), "UXDL")
    assert NULL_LOOP.is_null and len(NULL_LOOP) == 0


def test_parse_forms(tmp_path):
    a = parse_loop("urdl")
    b = parse_loop({"origin": [0, 0], "moves": "URDL"})
    c = parse_loop({"vertices": [[0, 0], [0, 1], [1, 1], [1, 0]]})
    d = parse_loop([[0, 0], [0, 1], [1, 1], [1, 0], [0, 0]])
    assert a == b == c == d
    path = tmp_path / "l.json"
    path.write_text(json.dumps(b.to_json()))
    assert load_loop(path) == a
    with pytest.raises(NonAdjacentStep):
        parse_loop([[0, 0], [2, 0], [2, 1]])
    with pytest.raises(NotClosed):
        parse_loop([[0, 0], [0, 1], [0, 2]])
    with pytest.raises(LoopError):
        parse_loop({"origin": [0, 0]})


def test_rotate_and_canonical():
    l = rectangle(2, 1)
    assert l.moves == "URRDLL"
    r = l.rotate(2)
    assert r.origin == (1, 1) and r.moves == "RDLLUR"
    assert r.same_cycle(l)
    assert l.canonical().moves == "DLLURR"
    assert not l.same_cycle(l.inverse())


def test_simple_and_bbox():
    assert rectangle(3, 2).is_simple()
    assert not Loop((0, 0), "RULDDLUR").is_simple()
    assert rectangle(3, 2, (1, -1)).bbox() == (1, -1, 4, 1)


def test_remove_backtracks_examples():
    assert remove_backtracks(Loop((0, 0), "UD")).is_null
    l = Loop((0, 0), "URRLDL")
    assert remove_backtracks(l).moves == "URDL"
    # wrap-around pair
    assert remove_backtracks(Loop((0, 0), "RURDLL")) == Loop((1, 0), "URDL")


@given(closed_loops())
def test_remove_backtracks_idempotent(l):
    r = remove_backtracks(l)
    assert remove_backtracks(r) == r
    w = r.moves
    n = len(w)
    inv = {"U": "D", "D": "U", "L": "R", "R": "L"}
    assert all(w[(i + 1) % n] != inv[w[i]] for i in range(n)) or n == 0


@given(closed_loops(max_walk=10), st.randoms(use_true_random=False))
def test_remove_backtracks_confluent(l, rnd):
    # delete a randomly chosen cyclically adjacent inverse pair until none remain
    inv = {"U": "D", "D": "U", "L": "R", "R": "L"}
    w = list(l.moves)
    while True:
        n = len(w)
        spots = [i for i in range(n) if n >= 2 and w[(i + 1) % n] == inv[w[i]]]
        if not spots:
            break
        i = rnd.choice(spots)
        j = (i + 1) % n
        for k in sorted((i, j), reverse=True):
            del w[k]
    r = remove_backtracks(l)
    assert len(r) == len(w)
    if w:
        # same cyclic word; the start vertex may move with wrap-around deletions
        assert Loop((0, 0), "".join(w)).canonical().moves == r.canonical().moves


def test_wind():
    p = plaquette_loop(Plaquette(0, 0, 1))
    assert wind(p, 3).moves == "URDL" * 3
    with pytest.raises(ValueError):
        wind(p, 0)
    with pytest.raises(ValueError):
        wind(NULL_LOOP, 2)


def test_multiplicities():
    l = wind(Loop((0, 0), "URDL"), 2)
    m = edge_multiplicities(l)
    assert m[OrientedEdge(0, 0, "U")] == 2
    u = unoriented_multiplicities(Loop((0, 0), "RULDDLUR"))
    assert u[OrientedEdge(0, 0, "R")] == 1 and len(u) == 8


# -- canonical keys ---------------------------------------------------------------


@given(closed_loops(), st.integers(0, 30), st.integers(-6, 6), st.integers(-6, 6))
def test_key_invariant_under_rotation_and_translation(l, k, dx, dy):
    K = height_assignment(l)
    moved = l.rotate(k).translate(dx, dy)
    Km = PlaquetteAssignment({Plaquette(p.x + dx, p.y + dy, p.sign): n for p, n in K.items()})
    assert canonical_key(moved, Km) == canonical_key(l, K)


def test_key_separates():
    p = plaquette_loop(Plaquette(0, 0, 1))
    K1 = PlaquetteAssignment({Plaquette(0, 0, -1): 1})
    K2 = PlaquetteAssignment({Plaquette(1, 0, -1): 1})
    assert canonical_key(p, K1) != canonical_key(p, K2)
    assert canonical_key(p, K1) != canonical_key(p.inverse(), K1)
    assert canonical_key(NULL_LOOP, None) == ("", ())


def test_dihedral_images_preserve_coefficient():
    l = Loop((0, 0), "URRULDDL" + "UURRDLDL")
    K = height_assignment(l)
    ref = coefficient(l, K)
    images = list(dihedral_images(l, K))
    assert len(images) == 8
    for img, Ki in images:
        # orientation-reversing images swap p and p^-1 consistently with the word
        assert coefficient(img, Ki) == ref
    assert canonical_key(l, K, dihedral=True) == canonical_key(images[3][0], images[3][1], dihedral=True)

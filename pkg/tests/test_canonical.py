import pytest
from hypothesis import given

from wilsonloops.canonical import (
    ZERO,
    PlaquetteAssignment,
    canonical_collection,
    collection_size,
    height_assignment,
    is_canonical,
    layer_counts,
)
from wilsonloops.geometry import is_balanced
from wilsonloops.lattice import Loop, Plaquette, wind

from conftest import closed_loops

P = Plaquette(0, 0, 1)
STAIRCASE = Loop((0, 0), "URURURURURURDLDLDLDLDLDL" + "URRUURRUURRULDDLLDDLLDDL")


def test_assignment_algebra():
    a = PlaquetteAssignment({P: 2, P.inverse(): 1})
    b = PlaquetteAssignment({(1, 0, 1): 1})
    assert a.area == 3 and (a + b).area == 4
    assert a.minus(P)[P] == 1
    with pytest.raises(ValueError):
        b.minus(P)
    with pytest.raises(ValueError):
        PlaquetteAssignment({P: -1})
    assert PlaquetteAssignment({P: 0}) == ZERO and ZERO.is_zero
    assert a.pairs() == {(0, 0): (2, 1)}
    assert PlaquetteAssignment.from_pairs({(0, 0): (2, 1)}) == a
    assert a.support() == {(0, 0)}
    assert hash(a) == hash(PlaquetteAssignment({P.inverse(): 1, P: 2}))


def test_assignment_json_roundtrip():
    a = PlaquetteAssignment({P: 2, Plaquette(-1, 3, -1): 5})
    js = a.to_json()
    assert js[0] == {"base": [0, 0], "sign": "+", "count": 2}
    assert PlaquetteAssignment.from_json(js) == a


def test_height_assignment_examples():
    assert height_assignment(Loop((0, 0), "URDL")) == PlaquetteAssignment({P.inverse(): 1})
    assert height_assignment(Loop((0, 0), "RULD")) == PlaquetteAssignment({P: 1})
    assert height_assignment(wind(Loop((0, 0), "URDL"), 3))[P.inverse()] == 3


def test_unit_plaquette_collection():
    coll = canonical_collection(Loop((0, 0), "URDL"))
    assert coll == [PlaquetteAssignment({P.inverse(): 1})]


def test_layered_collection():
    l = Loop((0, 0), "URRULDDL" + "UURRDLDL")
    coll = canonical_collection(l)
    assert len(coll) == collection_size(l) == 2
    assert [K.area for K in coll] == [3, 5]
    assert is_canonical(l, coll[1])
    assert not is_canonical(l, coll[1] + PlaquetteAssignment({P: 1, P.inverse(): 1}))


def test_staircase_collection():
    counts = [k for _, k in layer_counts(STAIRCASE)]
    assert len(counts) == 6 and counts.count(1) == 3
    coll = canonical_collection(STAIRCASE)
    assert len(coll) == 8
    assert sorted({K.area for K in coll}) == [6, 8, 10, 12]


@given(closed_loops(max_walk=10))
def test_collection_members_balanced(l):
    coll = canonical_collection(l)
    assert len(coll) == collection_size(l)
    assert len(set(coll)) == len(coll)
    # balance by edge counting, independently of the height shortcut
    for K in coll:
        assert is_balanced(l, K)

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksumfree import (
    Box,
    CapacityError,
    Instance,
    PointSet,
    UsageError,
    find_witness,
    is_free,
    min_max_coord,
)
from ksumfree.lattice import add_points, iter_solutions

from oracles import brute_solutions


@pytest.mark.parametrize(
    "p, expected", [((3, 5), (3, 5)), ((4, 4), (4, 4)), ((7,), (7, 7))]
)
def test_min_max_coord(p, expected):
    assert min_max_coord(p) == expected


def test_box_volume_and_row_major_order():
    box = Box((2, 3, 4))
    assert box.volume == 2 * 3 * 4
    pts = list(box.points())
    assert pts == sorted(pts)
    assert box.point(1) == (1, 1, 2)
    assert box.index((2, 1, 1)) == 12


@pytest.mark.parametrize("extent", [(1,), (7,), (3, 5), (2, 3, 4), (5, 1, 2)])
def test_box_index_bijection(extent):
    box = Box(extent)
    assert [box.index(p) for p in box.points()] == list(range(box.volume))
    assert all(box.index(box.point(i)) == i for i in range(box.volume))


def test_box_rejects_bad_extents():
    with pytest.raises(UsageError):
        Box((0, 3))
    with pytest.raises(UsageError):
        Box((1, 2, 3, 4))
    with pytest.raises(CapacityError):
        Box((1 << 12, 1 << 12, 2))


def test_instance_validation():
    with pytest.raises(UsageError):
        Instance.of(1, (3, 3), (3, 3))
    with pytest.raises(UsageError):
        Instance.of(2, (3,), (3, 3))
    assert Instance.of(4, (3, 3), (3, 3)).vacuous
    assert not Instance.of(3, (3, 3), (3, 3)).vacuous


def test_mixed_dimension_arithmetic_rejected():
    with pytest.raises(UsageError):
        add_points((1, 2), (1, 2, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 29)), max_size=80))
def test_pointset_cardinality_tracks_popcount(ops):
    s = PointSet(Box((5, 6)))
    ref = set()
    for insert, i in ops:
        if insert:
            s.add_index(i)
            ref.add(i)
        else:
            s.discard_index(i)
            ref.discard(i)
        assert s.cardinality == s.popcount() == len(ref)
    assert list(s.indices()) == sorted(ref)


def test_pointset_rejects_outside_points():
    s = PointSet(Box((3, 3)))
    with pytest.raises(UsageError):
        s.add((4, 1))
    with pytest.raises(UsageError):
        s.add_index(9)
    assert (4, 1) not in s


def test_pointset_mask_round_trip():
    box = Box((3, 4))
    s = PointSet(box, [(1, 1), (2, 3), (3, 4)])
    assert PointSet.from_mask(box, s.to_mask()) == s
    assert PointSet.full(box).cardinality == 12


def test_witness_full_box():
    inst = Instance.of(3, (3, 3), (3, 3))
    w = find_witness(PointSet.full(inst.box), inst)
    assert w is not None and w.summands == ((1, 1),) * 3


def test_no_witness_without_origin():
    inst = Instance.of(3, (3, 3), (3, 3))
    s = PointSet.full(inst.box)
    s.discard((1, 1))
    # enumerated every 3-multiset of the other 8 points: none sums to (3, 3)
    assert find_witness(s, inst) is None


def test_witness_uses_repetition():
    inst = Instance.of(2, (4, 4), (4, 4))
    w = find_witness(PointSet(inst.box, [(2, 2)]), inst)
    assert w is not None and w.summands == ((2, 2), (2, 2))


def test_is_free_one_dimensional():
    inst = Instance.of(3, 9, 9)
    assert is_free(PointSet(inst.box, [(x,) for x in range(4, 10)]), inst)
    assert not is_free(PointSet(inst.box, [(3,), (4,), (5,)]), inst)
    assert is_free(PointSet(inst.box), inst)


def test_dimension_mismatch_is_usage_error():
    with pytest.raises(UsageError):
        find_witness(PointSet(Box((3, 3))), Instance.of(2, 3, 3))
    with pytest.raises(UsageError):
        find_witness(PointSet(Box((3, 4))), Instance.of(2, (3, 3), (3, 3)))


@pytest.mark.parametrize(
    "k, b, n", [(2, (4, 4), (4, 4)), (3, (6, 5), (5, 5)), (4, (9,), (9,)), (3, (4, 4, 3), (3, 3, 3))]
)
def test_iter_solutions_matches_brute_force(k, b, n):
    pts = list(itertools.product(*(range(1, c + 1) for c in n)))
    assert sorted(iter_solutions(pts, b, k)) == sorted(brute_solutions(k, b, n))


instances = st.builds(
    lambda k, d, n, off: Instance.of(k, tuple(c + o for c, o in zip(n[:d], off[:d])), n[:d]),
    st.integers(2, 4),
    st.integers(1, 3),
    st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4)),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
).filter(lambda inst: min(inst.target) >= 1)


@settings(max_examples=80, deadline=None)
@given(instances, st.randoms(use_true_random=False))
def test_witness_resums_and_subsets_stay_free(inst, rnd):
    s = PointSet.from_indices(inst.box, [i for i in range(inst.box.volume) if rnd.random() < 0.6])
    w = find_witness(s, inst)
    if w is not None:
        assert len(w.summands) == inst.k
        assert w.total() == inst.target
        assert all(p in s for p in w.summands)
    else:
        sub = PointSet.from_indices(inst.box, [i for i in s.indices() if rnd.random() < 0.5])
        assert is_free(sub, inst)


@settings(max_examples=40, deadline=None)
@given(instances.filter(lambda inst: inst.vacuous))
def test_vacuous_instances_full_box_free(inst):
    assert is_free(PointSet.full(inst.box), inst)

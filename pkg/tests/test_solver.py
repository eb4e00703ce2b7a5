import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksumfree import (
    CapacityError,
    Instance,
    PointSet,
    UsageError,
    count_free,
    count_maximal_free,
    enumerate_forbidden,
    find_witness,
    is_free,
    mu_via_reduction,
    solve_bb,
    solve_exhaustive,
    solve_k2_pairing,
)

from oracles import brute_counts, brute_mu, brute_supports


def edge_points(inst):
    return sorted(sorted(e) for e in enumerate_forbidden(inst).edge_points())


def test_forbidden_single_edge():
    assert edge_points(Instance.of(3, (3, 3), (3, 3))) == [[(1, 1)]]


def test_forbidden_one_dimensional():
    assert edge_points(Instance.of(2, 3, 3)) == [[(1,), (2,)]]


def test_forbidden_k2_four_by_four():
    edges = edge_points(Instance.of(2, (4, 4), (4, 4)))
    assert edges == [
        [(1, 1), (3, 3)],
        [(1, 2), (3, 2)],
        [(1, 3), (3, 1)],
        [(2, 1), (2, 3)],
        [(2, 2)],
    ]


def small_instances():
    for n in [(3,), (6,), (9,), (2, 2), (3, 3), (2, 4), (4, 3), (2, 2, 2), (3, 2, 2)]:
        for k in (2, 3, 4):
            for b in itertools.product(*(range(1, 2 * c + 1) for c in n)):
                yield Instance.of(k, b, n)


def test_forbidden_matches_brute_force():
    checked = 0
    for inst in small_instances():
        hg = enumerate_forbidden(inst)
        got = {frozenset(e) for e in hg.edges}
        assert got == brute_supports(inst.k, inst.target, inst.box.extent), inst
        assert len(got) == len(hg.edges)
        assert all(1 <= len(e) <= inst.k for e in hg.edges)
        checked += 1
    assert checked > 300


@settings(max_examples=100, deadline=None)
@given(
    st.integers(2, 4),
    st.sampled_from([(5,), (3, 4), (4, 4), (2, 3, 3)]),
    st.randoms(use_true_random=False),
)
def test_support_set_soundness(k, n, rnd):
    b = tuple(rnd.randint(k, 2 * c) for c in n)
    inst = Instance.of(k, b, n)
    hg = enumerate_forbidden(inst)
    s = PointSet.from_indices(inst.box, [i for i in range(inst.box.volume) if rnd.random() < 0.5])
    assert (find_witness(s, inst) is not None) == hg.contains_edge(s)


@pytest.mark.parametrize(
    "k, b, n, mu",
    [
        (2, (3, 3), (3, 3), 7),
        (3, (3, 3), (3, 3), 8),
        (4, (3, 3), (3, 3), 9),
        (2, (5,), (5,), 3),
    ],
)
def test_solve_exhaustive_examples(k, b, n, mu):
    res = solve_exhaustive(Instance.of(k, b, n))
    assert res.mu == mu and res.exact
    assert res.witness_set.cardinality == mu


def test_exhaustive_capacity():
    with pytest.raises(CapacityError):
        solve_exhaustive(Instance.square(2, 8))


def test_solve_bb_k3_six():
    inst = Instance.square(3, 6)
    res = solve_bb(inst)
    assert 30 <= res.mu <= 36 and res.exact
    assert is_free(res.witness_set, inst)
    assert res.witness_set.cardinality == res.mu


def test_solve_bb_k2_four():
    assert solve_bb(Instance.square(2, 4)).mu == 11


def test_solve_bb_vacuous():
    res = solve_bb(Instance.square(5, 4))
    assert res.mu == 16 and res.nodes_explored == 0 and res.method == "vacuous"


def test_solve_bb_budget_bracket():
    inst = Instance.square(3, 12)
    res = solve_bb(inst, budget=3)
    assert not res.exact
    assert res.lower == res.mu == res.witness_set.cardinality
    assert is_free(res.witness_set, inst)
    exact = solve_bb(inst)
    assert res.lower <= exact.mu <= res.upper <= 144


def test_solve_bb_rejects_zero_budget():
    with pytest.raises(UsageError):
        solve_bb(Instance.square(3, 5), budget=0)


@pytest.mark.parametrize(
    "b, n, mu", [((3, 3), (3, 3), 7), ((4, 4), (4, 4), 11), ((2, 2), (4, 4), 15)]
)
def test_pairing_examples(b, n, mu):
    res = solve_k2_pairing(b, n)
    assert res.mu == mu == res.witness_set.cardinality
    assert is_free(res.witness_set, res.instance)
    assert res.mu == solve_exhaustive(Instance.of(2, b, n)).mu


def test_pairing_excludes_fixed_point():
    assert (2, 2) not in solve_k2_pairing((4, 4), (4, 4)).witness_set


def brute_cases():
    rng = random.Random(7)
    for n in [(4,), (7,), (10,), (2, 2), (3, 3), (2, 5), (4, 3), (4, 4), (2, 2, 2), (3, 2, 2)]:
        for k in (2, 3, 4):
            bs = list(itertools.product(*(range(1, 2 * c + 1) for c in n)))
            for b in rng.sample(bs, min(6, len(bs))):
                yield Instance.of(k, b, n)


@pytest.mark.parametrize("inst", list(brute_cases()), ids=str)
def test_solvers_agree_with_brute_force(inst):
    mu, lex = brute_mu(inst.k, inst.target, inst.box.extent)
    results = [solve_bb(inst), solve_exhaustive(inst)]
    if inst.k == 2:
        results.append(solve_k2_pairing(inst.target, inst.box.extent))
    for res in results:
        assert res.mu == mu, res.method
        assert tuple(res.witness_set.indices()) == lex, res.method
        assert is_free(res.witness_set, inst)


def test_solvers_agree_up_to_volume_twenty():
    rng = random.Random(11)
    boxes = [(n1, n2) for n1 in range(1, 21) for n2 in range(1, 21) if n1 * n2 <= 20]
    boxes += [(m,) for m in range(1, 21)] + [(2, 2, 5), (2, 3, 3), (1, 4, 5)]
    for n in boxes:
        for k in (2, 3, 4):
            b = tuple(rng.randint(1, 2 * c) for c in n)
            inst = Instance.of(k, b, n)
            a, e = solve_bb(inst), solve_exhaustive(inst)
            assert a.mu == e.mu and a.witness_set == e.witness_set, inst
            if k == 2:
                assert solve_k2_pairing(b, n).mu == a.mu


@pytest.mark.parametrize(
    "k, b, n, expected", [(2, (2, 2), (4, 4), 15), (3, (3, 3), (10, 10), 99), (3, (4, 4), (4, 4), 15)]
)
def test_mu_via_reduction(k, b, n, expected):
    res = mu_via_reduction(k, b, n)
    assert res.mu == expected == solve_bb(Instance.of(k, b, n)).mu
    assert is_free(res.witness_set, res.instance)
    assert res.witness_set.cardinality == expected


def test_mu_via_reduction_needs_b_in_box():
    with pytest.raises(UsageError):
        mu_via_reduction(2, (5, 5), (4, 4))


def test_monotone_in_box_extent():
    for k in (2, 3):
        b = (5, 4)
        prev = {}
        for n1 in range(1, 7):
            for n2 in range(1, 6):
                mu = solve_bb(Instance.of(k, b, (n1, n2))).mu
                if (n1 - 1, n2) in prev:
                    assert mu >= prev[(n1 - 1, n2)]
                if (n1, n2 - 1) in prev:
                    assert mu >= prev[(n1, n2 - 1)]
                prev[(n1, n2)] = mu


@pytest.mark.parametrize(
    "k, b, n, free, maximal",
    [(2, 2, 2, 2, 1), (2, 3, 3, 6, 2), (5, (3, 3), (2, 2), 16, 1), (3, 2, 4, 16, 1)],
)
def test_counts(k, b, n, free, maximal):
    inst = Instance.of(k, b, n)
    assert count_free(inst) == free
    assert count_maximal_free(inst) == maximal


def test_count_capacity():
    with pytest.raises(CapacityError):
        count_free(Instance.square(2, 5))


@pytest.mark.parametrize(
    "k, b, n",
    [(2, (4, 4), (4, 4)), (3, (5, 4), (4, 4)), (2, (9,), (12,)), (3, (6, 6), (3, 5)), (2, (3, 3, 2), (2, 2, 3))],
)
def test_counts_match_brute_force(k, b, n):
    inst = Instance.of(k, b, n)
    free, maximal = brute_counts(k, b, n)
    assert count_free(inst) == free
    assert count_maximal_free(inst) == maximal
    assert free >= maximal >= 1
    assert (free == 2 ** inst.box.volume) == inst.vacuous

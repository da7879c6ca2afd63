import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import bfs_distance, members
from nestflip.distance import (
    EnumerationStats, SymmetricCircuitPartition, enumerate_members, exact_distance, psi,
)
from nestflip.errors import DegreeMismatch, NotMember, NotRealizable, TooLarge
from nestflip.fragments import check_membership, tree_from_sets
from nestflip.generators import random_laminar, random_pair, random_realizable
from nestflip.multigraph import Multigraph, delta
from nestflip.nested import transform_nested


def path_pair():
    return Multigraph(4, [(0, 1), (1, 2), (2, 3)]), Multigraph(4, [(0, 2), (1, 2), (1, 3)])


def test_psi_examples():
    g, h = path_pair()
    assert psi(g, g) == (0, SymmetricCircuitPartition([]))
    value, part = psi(g, h)
    assert value == 1 and part.m == 1
    part.validate(g, h)
    assert sorted(len(c) for c in part.circuits) == [4]


def test_psi_doubled_instance():
    g = Multigraph(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    h = Multigraph(8, [(0, 2), (1, 3), (4, 6), (5, 7)])
    value, part = psi(g, h)
    assert (value, part.m) == (2, 2)
    assert exact_distance(g, h) == 2


def test_psi_errors():
    g, h = path_pair()
    with pytest.raises(DegreeMismatch):
        psi(g, Multigraph(4, [(0, 1)]))
    big_g = Multigraph(10, [(2 * i, 2 * i + 1) for i in range(5)] * 2)
    big_h = Multigraph(10, [(2 * i + 1, (2 * i + 2) % 10) for i in range(5)] * 2)
    with pytest.raises(TooLarge):
        psi(big_g, big_h)
    with pytest.raises(ValueError):
        psi(g, h, "fast")


def test_partition_validation_catches_bad_cover():
    g, h = path_pair()
    with pytest.raises(ValueError):
        SymmetricCircuitPartition([[0, 1, 2, 3]]).validate(g, h)
    with pytest.raises(ValueError):
        SymmetricCircuitPartition([[0, 1, 3]]).validate(g, h)


def _unconstrained_pair(rng, max_delta=12):
    while True:
        n = rng.randint(3, 7)
        t = tree_from_sets([], n)
        s = random_realizable(t, rng, 4)
        if s is None:
            continue
        g, h = random_pair(t, s, rng, 30)
        if 0 < delta(g, h) <= max_delta:
            return g, h


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_exact_psi_equals_distance(seed):
    g, h = _unconstrained_pair(random.Random(seed))
    value, part = psi(g, h)
    part.validate(g, h)
    assert value == exact_distance(g, h) == bfs_distance(g, h)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_greedy_partition_valid_and_not_better(seed):
    g, h = _unconstrained_pair(random.Random(seed), max_delta=16)
    gv, gp = psi(g, h, "greedy")
    gp.validate(g, h)
    assert gv >= psi(g, h)[0]


def test_exact_distance_examples():
    g, h = path_pair()
    assert exact_distance(g, g) == 0
    assert exact_distance(g, h, cc=tree_from_sets([], 4)) == 1
    with pytest.raises(NotMember):
        exact_distance(g, h, cc=tree_from_sets([[0, 3]], 4))
    far_g = Multigraph(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    far_h = Multigraph(8, [(0, 2), (1, 3), (4, 6), (5, 7)])
    with pytest.raises(TooLarge):
        exact_distance(far_g, far_h, cap=5)


def test_sandwich_on_constrained_instances():
    rng = random.Random(41)
    done = 0
    while done < 40:
        t = random_laminar(rng.randint(3, 6), rng, max_height=4)
        s = random_realizable(t, rng, 3)
        if s is None or not t.internal_nodes[1:]:
            continue
        g, h = random_pair(t, s, rng, 30)
        if g == h or delta(g, h) > 12:
            continue
        lower = psi(g, h)[0]
        exact = exact_distance(g, h, s, t)
        assert lower <= exact <= len(transform_nested(g, h, s, t))
        assert exact == bfs_distance(g, h, ok=lambda k: check_membership(k, s, t))
        done += 1


def test_enumerate_examples():
    assert list(enumerate_members((1, 1), tree_from_sets([], 2))) == [Multigraph(2, [(0, 1)])]
    got = set(enumerate_members((2, 2, 2), tree_from_sets([], 3)))
    assert got == members((2, 2, 2), [])
    # loop-free degrees (2, 2, 2) force every multiplicity to one
    assert got == {Multigraph(3, [(0, 1), (1, 2), (0, 2)])}
    got = set(enumerate_members((2, 1, 1, 2), tree_from_sets([[0, 1]], 4)))
    assert got == members((2, 1, 1, 2), [[0, 1]])
    with pytest.raises(NotRealizable):
        list(enumerate_members((1, 1, 1), tree_from_sets([], 3)))


def test_enumerate_streams_without_duplicates():
    t = tree_from_sets([[0, 1, 2]], 6)
    s = (2, 2, 2, 2, 2, 2)
    stats = EnumerationStats()
    it = enumerate_members(s, t, stats)
    first = next(it)
    assert check_membership(first, s, t)
    rest = list(it)
    allg = [first] + rest
    assert len(allg) == len(set(allg)) == stats.emitted
    assert set(allg) == members(s, [[0, 1, 2]])
    assert stats.max_delay >= 0

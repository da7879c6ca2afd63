import random

import pytest
from hypothesis import given, settings, strategies as st

from nestflip.connected import improve_step, transform_connected
from nestflip.errors import AlreadyEqual, DegreeMismatch, NotConnected
from nestflip.fragments import tree_from_sets
from nestflip.generators import random_walk
from nestflip.multigraph import Flip, Multigraph, delta, intersect, is_connected
from nestflip.realize import is_realizable, realize


def path_pair():
    return Multigraph(4, [(0, 1), (1, 2), (2, 3)]), Multigraph(4, [(0, 2), (1, 2), (1, 3)])


def _check_step(g, h, step):
    floor = intersect(g, h)
    cur = g
    for f in step:
        cur = cur.apply(f)
        assert is_connected(cur)
        assert all(cur.m(*p) >= k for p, k in floor.pairs())
    assert delta(cur, h) <= delta(g, h) - 2
    return cur


def test_path_example_single_flip():
    g, h = path_pair()
    step = improve_step(g, h)
    assert step.flips == [Flip(0, 1, 2, 3)]
    rep = transform_connected(g, h)
    assert len(rep) == 1 and rep.delta_initial == 4 and rep.delta_final == 0


def test_parallel_pair_takes_cycle_branch():
    # the doubled edge 0-1 is surplus and lies on a 2-cycle
    g = Multigraph(4, {(0, 1): 2, (1, 2): 1, (2, 3): 1, (0, 3): 1})
    h = Multigraph(4, [(0, 1), (0, 3), (1, 3), (0, 2), (1, 2)])
    step = improve_step(g, h)
    assert step.branch == "cycle"
    assert _check_step(g, h, step) == h


@pytest.mark.parametrize("g, h", [
    (Multigraph(5, {(0, 1): 2, (0, 4): 1, (1, 2): 1, (2, 3): 1}),
     Multigraph(5, {(0, 1): 2, (0, 2): 1, (1, 3): 1, (2, 4): 1})),
    (Multigraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]),
     Multigraph(5, [(0, 2), (1, 3), (1, 4), (2, 3)])),
])
def test_detour_instances(g, h):
    # every surplus edge is a bridge and no single flip works
    step = improve_step(g, h)
    assert step.branch == "detour" and len(step) == 2
    _check_step(g, h, step)


def test_errors():
    g, h = path_pair()
    with pytest.raises(AlreadyEqual):
        improve_step(g, g)
    with pytest.raises(DegreeMismatch):
        transform_connected(g, Multigraph(4, [(0, 1), (2, 3), (1, 2), (0, 3)]))
    with pytest.raises(NotConnected):
        transform_connected(Multigraph(4, [(0, 1), (2, 3)]), Multigraph(4, [(0, 2), (1, 3)]))


def test_identical_graphs():
    g, _ = path_pair()
    rep = transform_connected(g, g)
    assert len(rep) == 0 and rep.delta_final == 0


def _random_connected_pair(rng, n_max=7, steps=40):
    while True:
        n = rng.randint(2, n_max)
        s = tuple(rng.randint(1, 4) for _ in range(n))
        t = tree_from_sets([], n)
        if is_realizable(s, t):
            g0 = realize(s, t)
            return random_walk(g0, t, rng, steps), random_walk(g0, t, rng, steps)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_transform_properties(seed):
    rng = random.Random(seed)
    g, h = _random_connected_pair(rng)
    rep = transform_connected(g, h)
    assert len(rep) <= delta(g, h)
    assert rep.goodedge_violations == 0 and rep.delta_final == 0
    floor = intersect(g, h)
    for k in rep.flips.replay(g):
        assert is_connected(k)
        assert all(k.m(*p) >= r for p, r in floor.pairs())
    assert rep.flips.apply(g) == h

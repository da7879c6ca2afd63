"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""

import itertools
import random
import time

import pytest

from oracles import all_realizations, bfs_distance, connected_mask, family_mask, laminar_families
from nestflip.connected import transform_connected
from nestflip.distance import enumerate_members, exact_distance, psi
from nestflip.errors import NotLaminar
from nestflip.fragments import (
    check_membership, extend, inherited, is_correct_flip, is_special_flip, lift_flip,
    root_subtree, tree_from_sets, validate_and_normalize,
)
from nestflip.generators import random_laminar, random_pair, random_realizable, random_walk
from nestflip.multigraph import Flip, all_flips, apply_flip, delta, intersect, is_connected
from nestflip.nested import transform_nested
from nestflip.realize import is_realizable, realize


# -- suite 1: every instance with n <= 5, degrees <= 4, up to two fragments -------

@pytest.fixture(scope="module")
def small_sweep():
    stats = {"instances": 0, "realizable": 0, "members": 0,
             "bad_verdict": [], "bad_realize": [], "bad_enum": []}
    t0 = time.time()
    for n in range(1, 6):
        fams = list(laminar_families(n))
        trees = [tree_from_sets(f, n) for f in fams]
        masks = [family_mask(f, n) for f in fams]
        for s in itertools.product(range(5), repeat=n):
            reals = [(g, connected_mask(g)) for g in all_realizations(s, 4)]
            for fam, tr, fm in zip(fams, trees, masks):
                stats["instances"] += 1
                mem = {g for g, cm in reals if cm & fm == fm}
                ok = bool(is_realizable(s, tr))
                if ok != bool(mem):
                    stats["bad_verdict"].append((s, fam))
                if not mem:
                    continue
                stats["realizable"] += 1
                if not check_membership(realize(s, tr), s, tr):
                    stats["bad_realize"].append((s, fam))
                got = list(enumerate_members(s, tr))
                stats["members"] += len(got)
                if len(got) != len(set(got)) or set(got) != mem:
                    stats["bad_enum"].append((s, fam))
    stats["seconds"] = time.time() - t0
    return stats


def test_criterion_1_realizability(small_sweep, verdict):
    bad = small_sweep["bad_verdict"]
    verdict(1, not bad, f"{small_sweep['instances']} instances, {len(bad)} disagreements "
                        f"with brute force ({small_sweep['seconds']:.0f}s sweep)")
    assert not bad, bad[:5]


def test_criterion_2_realize(small_sweep, verdict):
    bad = small_sweep["bad_realize"]
    verdict(2, not bad, f"{small_sweep['realizable']} realizable instances, {len(bad)} invalid outputs")
    assert not bad, bad[:5]


def test_criterion_7_enumeration(small_sweep, verdict):
    bad = small_sweep["bad_enum"]
    verdict(7, not bad, f"{small_sweep['realizable']} instances, {small_sweep['members']} members, "
                        f"{len(bad)} set mismatches")
    assert not bad, bad[:5]


# -- suite 3: connected pairs ------------------------------------------------------

@pytest.fixture(scope="module")
def connected_pairs():
    rng = random.Random(2024)
    out = []
    while len(out) < 1000:
        n = rng.randint(2, 7)
        t = tree_from_sets([], n)
        s = tuple(rng.randint(1, 4) for _ in range(n))
        if not is_realizable(s, t):
            continue
        g0 = realize(s, t)
        g, h = random_walk(g0, t, rng, 40), random_walk(g0, t, rng, 40)
        if g != h:
            out.append((s, t, g, h))
    return out


def test_criterion_3_connected_bound(connected_pairs, verdict):
    failures = 0
    worst = 0.0
    for s, t, g, h in connected_pairs:
        rep = transform_connected(g, h)
        floor = intersect(g, h)
        cur, ok = g, len(rep) <= delta(g, h) and rep.goodedge_violations == 0
        for f in rep.flips:
            cur = apply_flip(cur, f)
            ok = ok and is_connected(cur) and all(cur.m(*p) >= k for p, k in floor.pairs())
        ok = ok and cur == h
        failures += not ok
        worst = max(worst, len(rep) / delta(g, h))
    verdict(3, failures == 0, f"{len(connected_pairs)} pairs, {failures} failures, "
                              f"worst length/delta {worst:.3f}")
    assert failures == 0


def test_criterion_4_four_approximation(connected_pairs, verdict):
    checked = failures = 0
    worst = 0.0
    for s, t, g, h in connected_pairs:
        if delta(g, h) > 12:
            continue
        length = len(transform_connected(g, h))
        dist = exact_distance(g, h, s, t)
        checked += 1
        failures += length > 4 * dist
        worst = max(worst, length / dist)
    verdict(4, failures == 0 and checked > 0,
            f"{checked} pairs with |G delta H| <= 12, {failures} over 4x exact, worst ratio {worst:.2f}")
    assert checked > 0 and failures == 0


# -- suite 5: nested pairs -------------------------------------------------------------

def test_criterion_5_nested_bound(verdict):
    rng = random.Random(5150)
    done = failures = 0
    worst = 0.0
    while done < 500:
        t = random_laminar(rng.randint(3, 7), rng, max_height=4)
        if len(t.internal_nodes) < 2:
            continue
        s = random_realizable(t, rng, 4)
        if s is None:
            continue
        g, h = random_pair(t, s, rng, 60)
        if g == h:
            continue
        seq = transform_nested(g, h, s, t)
        bound = (2 * t.height + 1) * delta(g, h)
        cur, ok = g, len(seq) <= bound
        for f in seq:
            ok = ok and is_correct_flip(cur, t, f)
            cur = apply_flip(cur, f)
            ok = ok and check_membership(cur, s, t)
        ok = ok and cur == h
        failures += not ok
        worst = max(worst, len(seq) / delta(g, h))
        done += 1
    verdict(5, failures == 0, f"{done} pairs (d <= 4), {failures} failures, "
                              f"worst length/delta {worst:.3f}")
    assert failures == 0


# -- suite 6: unconstrained distance -------------------------------------------------

def _free_walk(g, rng, steps):
    for _ in range(steps):
        flips = [f for f, _ in all_flips(g)]
        if flips:
            g = apply_flip(g, rng.choice(flips))
    return g


def test_criterion_6_psi_equals_distance(verdict):
    rng = random.Random(606)
    done = failures = 0
    while done < 200:
        n = rng.randint(3, 7)
        s = tuple(rng.randint(1, 4) for _ in range(n))
        t = tree_from_sets([], n)
        if not is_realizable(s, t):
            continue
        g0 = realize(s, t)
        g, h = _free_walk(g0, rng, 15), _free_walk(g0, rng, 15)
        if g == h or delta(g, h) > 12:
            continue
        value, part = psi(g, h)
        part.validate(g, h)
        failures += not (value == bfs_distance(g, h) == exact_distance(g, h))
        done += 1
    verdict(6, failures == 0, f"{done} unconstrained pairs, {failures} psi/BFS disagreements")
    assert failures == 0


# -- special flips ----------------------------------------------------------------------

def _random_lift(view, qf, rng):
    # provenance lists one entry per edge copy; draw two distinct copies
    pools = {p: list(v) for p, v in view.provenance.items()}
    picks = []
    for x, y in ((qf.a, qf.b), (qf.c, qf.d)):
        pool = pools[tuple(sorted((x, y)))]
        u, v = pool.pop(rng.randrange(len(pool)))
        picks.append((u, v) if view.block_of[u] == x else (v, u))
    (a, b), (c, d) = picks
    return Flip(a, b, c, d)


def test_criterion_8_lifted_special_flips(verdict):
    rng = random.Random(808)
    sampled = failures = 0
    while sampled < 10_000:
        t = random_laminar(rng.randint(3, 8), rng, max_height=5)
        if len(t.internal_nodes) < 2:
            continue
        s = random_realizable(t, rng, 4)
        if s is None:
            continue
        g = random_walk(realize(s, t), t, rng, 40)
        # grow a random well-structured subtree, then extend it once more
        sub = root_subtree(t)
        for _ in range(rng.randint(0, len(t.internal_nodes) - 1)):
            if not sub.extensible_leaves():
                break
            sub, _ = extend(sub, rng.choice(sub.extensible_leaves()))
        if not sub.extensible_leaves():
            continue
        t2, special = extend(sub, rng.choice(sub.extensible_leaves()))
        view = inherited(g, t2)
        xs = [i for i, b in enumerate(view.blocks) if b in special]
        flips = [qf for qf, _ in all_flips(view.qgraph) if is_special_flip(view, xs, qf)]
        for qf in rng.sample(flips, min(len(flips), 40)):
            for lifted in (lift_flip(view, qf), _random_lift(view, qf, rng)):
                failures += not is_correct_flip(g, t, lifted)
                sampled += 1
    verdict(8, failures == 0, f"{sampled} lifted special flips, {failures} incorrect")
    assert failures == 0


# -- validator ------------------------------------------------------------------------------

def test_criterion_9_overlapping_family_rejected(verdict):
    names = [f"{c}{i}" for i in (1, 2) for c in "abcdef"] + ["x"]
    ix = {v: i for i, v in enumerate(names)}
    groups = [("a1", "b1", "d1", "x"), ("a1", "b1", "e1", "x"), ("b1", "c1", "f1", "x"),
              ("b1", "c1", "e1", "x"), ("a2", "b2", "d2", "x"), ("a2", "b2", "e2", "x"),
              ("b2", "c2", "f2", "x"), ("b2", "c2", "e2", "x")]
    sets = [[ix[v] for v in grp] for grp in groups]
    named = None
    try:
        validate_and_normalize(sets, len(names))
    except NotLaminar as e:
        named = e.pair
    given = {tuple(sorted(s)) for s in sets}
    ok = named is not None and all(tuple(p) in given for p in named)
    if ok:
        a, b = map(set, named)
        ok = bool(a & b) and not a <= b and not b <= a
    verdict(9, ok, f"NotLaminar naming {named}")
    assert ok

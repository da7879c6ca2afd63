"""Random instances: laminar families, realizable degree vectors, members."""

from __future__ import annotations

import random

from .fragments import FragmentTree, build_fragment_tree, check_membership, validate_and_normalize
from .multigraph import Flip, Multigraph, apply_flip
from .realize import is_realizable, realize
from .fragments import is_correct_flip


def random_laminar(n: int, rng: random.Random, max_height: int | None = None,
                   split_prob: float = 0.6) -> FragmentTree:
    """Random laminar family built by recursively splitting blocks."""
    sets = []

    def split(block, depth):
        if len(block) < 3 or rng.random() > split_prob:
            return
        if max_height is not None and depth + 2 > max_height:
            return
        k = rng.randint(2, len(block) - 1)
        part = rng.sample(block, k)
        sets.append(part)
        split(part, depth + 1)
        rest = [v for v in block if v not in part]
        if len(rest) >= 2 and rng.random() < 0.5:
            sets.append(rest)
            split(rest, depth + 1)

    split(list(range(n)), 1)
    tree = build_fragment_tree(validate_and_normalize(sets, n))
    if max_height is not None and tree.height > max_height:
        return random_laminar(n, rng, max_height, split_prob)
    return tree


def random_realizable(tree: FragmentTree, rng: random.Random, max_degree: int = 4,
                      tries: int = 1000) -> tuple[int, ...] | None:
    for _ in range(tries):
        s = tuple(rng.randint(1, max_degree) for _ in range(tree.n))
        if is_realizable(s, tree):
            return s
    return None


def random_walk(g: Multigraph, tree: FragmentTree, rng: random.Random, steps: int) -> Multigraph:
    """Apply ``steps`` random correct flips (rejected proposals count too)."""
    for _ in range(steps):
        occ = list(g.edges())
        if len(occ) < 2:
            return g
        i, j = rng.sample(range(len(occ)), 2)
        (a, b), (c, d) = occ[i], occ[j]
        if rng.random() < 0.5:
            c, d = d, c
        f = Flip(a, b, c, d)
        if not f.is_loop_free():
            continue
        if is_correct_flip(g, tree, f):
            g = apply_flip(g, f)
    return g


def random_pair(tree: FragmentTree, s, rng: random.Random, steps: int = 30):
    """Two members of the constrained family, both reached by random walks."""
    start = realize(s, tree)
    g = random_walk(start, tree, rng, steps)
    h = random_walk(start, tree, rng, steps)
    assert check_membership(g, s, tree) and check_membership(h, s, tree)
    return g, h

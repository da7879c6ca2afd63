#!/usr/bin/env python3
# Realize a degree vector under nested fragments, scramble two copies with
# random correct flips, then transform one into the other.

import random

from nestflip import (
    build_fragment_tree, check_membership, delta, is_realizable, plan_nested,
    realize, validate_and_normalize,
)
from nestflip.generators import random_walk

rng = random.Random(7)

n = 7
cc = validate_and_normalize([[0, 1, 2, 3], [0, 1], [4, 5]], n)
tree = build_fragment_tree(cc)
s = (3, 2, 2, 3, 2, 2, 2)

print("height:", tree.height)
print("realizable:", bool(is_realizable(s, tree)))


# In[2]:

g0 = realize(s, tree)
print("seed graph:", sorted(g0.pairs()))

g = random_walk(g0, tree, rng, 80)
h = random_walk(g0, tree, rng, 80)
print("|G delta H| =", delta(g, h))


# In[3]:

plan = plan_nested(g, h, s, tree)
for st in plan.stages:
    print(sorted(st.node), "equalize:", len(st.g_flips) + len(st.h_flips),
          "align:", len(st.align_flips))

print("length", len(plan.sequence), "bound", plan.bound)

cur = g
for f in plan.sequence:
    cur = cur.apply(f)
    assert check_membership(cur, s, tree)
assert cur == h
print("every intermediate graph keeps all fragments connected")

#!/usr/bin/env python3
# Without fragment constraints the flip distance is |G delta H|/2 minus the
# largest number of alternating circuits. Compare it with plain search.

import random
import time

from nestflip import Multigraph, delta, exact_distance, psi
from nestflip.multigraph import all_flips, apply_flip

g = Multigraph(4, [(0, 1), (1, 2), (2, 3)])
h = Multigraph(4, [(0, 2), (1, 2), (1, 3)])
value, part = psi(g, h)
print("psi =", value, "circuits:", part.circuits)
print("bfs =", exact_distance(g, h))


# In[2]:

rng = random.Random(3)
base = Multigraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)])

def shuffle(x, steps=12):
    for _ in range(steps):
        x = apply_flip(x, rng.choice([f for f, _ in all_flips(x)]))
    return x

rows = []
for _ in range(20):
    a, b = shuffle(base), shuffle(base)
    t = time.time()
    p = psi(a, b)[0]
    t_psi = time.time() - t
    t = time.time()
    d = exact_distance(a, b)
    t_bfs = time.time() - t
    rows.append((delta(a, b), p, d, t_psi, t_bfs))

print(" delta psi bfs   t_psi    t_bfs")
for r in rows:
    print("%6d %3d %3d %7.4f %8.4f" % r)
print("all equal:", all(p == d for _, p, d, _, _ in rows))


# In[3]:

# greedy shortest-circuit-first gives an upper bound on psi
gv = psi(a, b, "greedy")[0]
print("greedy", gv, ">= exact", psi(a, b)[0])

"""Independent brute-force oracles used by the test suite.

Nothing here calls into the bound computations or the transformation
algorithms; only the plain Multigraph container is shared.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

from nestflip.multigraph import Multigraph


def all_realizations(s, max_mult: int | None = None):
    """Every loop-free multigraph with exact degree vector ``s``."""
    n = len(s)
    cap = max(s, default=0) if max_mult is None else max_mult
    rem = list(s)
    mult: dict = {}

    def fill(i):
        while i < n and rem[i] == 0:
            i += 1
        if i == n:
            yield Multigraph(n, dict(mult))
            return
        yield from spread(i, i + 1)

    def spread(i, j):
        if rem[i] == 0:
            yield from fill(i + 1)
            return
        if j >= n:
            return
        top = min(rem[i], rem[j], cap)
        for k in range(top, -1, -1):
            if k:
                mult[(i, j)] = k
            rem[i] -= k
            rem[j] -= k
            yield from spread(i, j + 1)
            rem[i] += k
            rem[j] += k
            mult.pop((i, j), None)

    if sum(s) % 2:
        return
    yield from fill(0)


def connected_on(g: Multigraph, subset) -> bool:
    subset = set(subset)
    if len(subset) <= 1:
        return True
    start = min(subset)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for (u, v), _ in g.pairs():
            for a, b in ((u, v), (v, u)):
                if a == x and b in subset and b not in seen:
                    seen.add(b)
                    queue.append(b)
    return seen == subset


def connected_mask(g: Multigraph) -> int:
    """Bit ``m`` set iff the vertex subset encoded by ``m`` induces a
    connected subgraph."""
    n = g.n
    adj = [0] * n
    for (u, v), _ in g.pairs():
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    out = 0
    for m in range(1, 1 << n):
        start = m & -m
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nb = adj[low.bit_length() - 1] & m & ~seen
            seen |= nb
            frontier |= nb
        if seen == m:
            out |= 1 << m
    return out


def members(s, fragments) -> set[Multigraph]:
    """Brute-force member set of the constrained family."""
    n = len(s)
    frags = list(fragments) + [range(n)]
    return {g for g in all_realizations(s) if all(connected_on(g, f) for f in frags)}


def family_mask(fragments, n) -> int:
    m = 1 << ((1 << n) - 1) if n else 0
    for f in fragments:
        m |= 1 << sum(1 << v for v in f)
    return m


def laminar_families(n: int, max_sets: int = 2):
    """Families of up to ``max_sets`` non-trivial subsets (size 2..n-1) that
    are pairwise disjoint or nested."""
    subsets = [frozenset(c) for k in range(2, n) for c in combinations(range(n), k)]
    yield ()
    for s in subsets:
        yield (s,)
    if max_sets >= 2:
        for a, b in combinations(subsets, 2):
            if not (a & b) or a <= b or b <= a:
                yield (a, b)


def bfs_distance(g: Multigraph, h: Multigraph, ok=lambda k: True, cap: int = 2_000_000) -> int:
    """Shortest flip distance by plain breadth-first search over ``ok`` states."""
    if g == h:
        return 0
    seen = {g}
    frontier = [g]
    dist = 0
    while frontier:
        dist += 1
        nxt = []
        for x in frontier:
            for y in neighbors(x):
                if y in seen or not ok(y):
                    continue
                if y == h:
                    return dist
                seen.add(y)
                nxt.append(y)
        if len(seen) > cap:
            raise RuntimeError("bfs state cap exceeded")
        frontier = nxt
    raise ValueError("target unreachable")


def neighbors(g: Multigraph):
    occ = list(g.edges())
    for i, j in combinations(range(len(occ)), 2):
        (a, b), (c, d) = occ[i], occ[j]
        for x, y, z, w in ((a, b, c, d), (a, b, d, c)):
            if x != z and y != w:
                mult = g.as_dict()
                for p in ((x, y), (z, w)):
                    p = tuple(sorted(p))
                    mult[p] -= 1
                for p in ((x, z), (y, w)):
                    p = tuple(sorted(p))
                    mult[p] = mult.get(p, 0) + 1
                yield Multigraph(g.n, {p: k for p, k in mult.items() if k})

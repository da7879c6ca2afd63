"""Flip distance: symmetric circuit partitions, exact search, enumeration.

Without constraints the flip distance between two realizations of the same
degree vector equals ``ψ(G, H) = δ(G, H)/2 − m(G, H)``, where ``m`` is the
largest number of edge-disjoint alternating circuits covering ``G Δ H``.
Computing ``m`` is NP-hard; the exact routine here is exponential and
refuses inputs above a size cap.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import DegreeMismatch, NotMember, TooLarge
from .fragments import FragmentTree, NestedCollection, build_fragment_tree, check_membership
from .multigraph import Multigraph, Pair, all_flips, canonical_key, is_connected, minus, pair
from .realize import realize

EXACT_CAP = 16
STATE_CAP = 500_000


@dataclass
class SymmetricCircuitPartition:
    """Circuits as vertex cycles ``[v0, v1, ..., v_{2k-1}]``: the edge
    ``v_{2i} v_{2i+1}`` lies in ``G − H``, every other edge in ``H − G``
    (including the closing edge back to ``v0``)."""

    circuits: list[list[int]] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.circuits)

    def edges(self, circuit: list[int]) -> tuple[list[Pair], list[Pair]]:
        k = len(circuit)
        steps = [pair(circuit[i], circuit[(i + 1) % k]) for i in range(k)]
        return steps[0::2], steps[1::2]

    def validate(self, g: Multigraph, h: Multigraph) -> None:
        """Raise ``ValueError`` unless the circuits alternate and partition ``G Δ H``."""
        red, blue = {}, {}
        for c in self.circuits:
            if len(c) < 4 or len(c) % 2:
                raise ValueError(f"circuit {c} has odd or too short length")
            r, b = self.edges(c)
            for p in r:
                red[p] = red.get(p, 0) + 1
            for p in b:
                blue[p] = blue.get(p, 0) + 1
        if red != minus(g, h).as_dict() or blue != minus(h, g).as_dict():
            raise ValueError("circuits do not partition the symmetric difference")


def _sides(g: Multigraph, h: Multigraph):
    if g.n != h.n or g.degrees() != h.degrees():
        raise DegreeMismatch("graphs realize different degree vectors")
    return minus(g, h), minus(h, g)


def _adjacency(n: int, side: Multigraph) -> list[list[int]]:
    adj = [[] for _ in range(n)]
    for (u, v), _ in side.pairs():
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _exact(n: int, red: Multigraph, blue: Multigraph) -> list[list[int]]:
    rpairs = [p for p, _ in red.pairs()]
    bpairs = [p for p, _ in blue.pairs()]
    rindex = {p: i for i, p in enumerate(rpairs)}
    bindex = {p: i for i, p in enumerate(bpairs)}
    radj, badj = _adjacency(n, red), _adjacency(n, blue)

    def circuits_through(rc: list[int], bc: list[int]) -> Iterator[list[int]]:
        # every alternating circuit using the first remaining red pair, which
        # is always traversed in its stored orientation
        first = next(i for i, k in enumerate(rc) if k)
        u, v = rpairs[first]
        rc[first] -= 1
        path = [u, v]

        def walk(x: int, want_red: bool):
            if want_red:
                for y in radj[x]:
                    i = rindex[pair(x, y)]
                    if rc[i]:
                        rc[i] -= 1
                        path.append(y)
                        yield from walk(y, False)
                        path.pop()
                        rc[i] += 1
            else:
                for y in badj[x]:
                    i = bindex[pair(x, y)]
                    if not bc[i]:
                        continue
                    bc[i] -= 1
                    if y == u:
                        yield list(path)
                    path.append(y)
                    yield from walk(y, True)
                    path.pop()
                    bc[i] += 1

        yield from walk(v, False)
        rc[first] += 1

    @lru_cache(maxsize=None)
    def best(rstate: tuple, bstate: tuple) -> tuple[int, tuple]:
        if not any(rstate):
            return 0, ()
        rc, bc = list(rstate), list(bstate)
        top, choice = -1, ()
        found = []
        for c in circuits_through(rc, bc):
            found.append(c)
        for c in found:
            r2, b2 = list(rstate), list(bstate)
            k = len(c)
            for i in range(k):
                p = pair(c[i], c[(i + 1) % k])
                if i % 2 == 0:
                    r2[rindex[p]] -= 1
                else:
                    b2[bindex[p]] -= 1
            sub, rest = best(tuple(r2), tuple(b2))
            if sub + 1 > top:
                top, choice = sub + 1, (tuple(c),) + rest
        return top, choice

    _, chosen = best(tuple(k for _, k in red.pairs()), tuple(k for _, k in blue.pairs()))
    return [list(c) for c in chosen]


def _shortest_from(n: int, u: int, v: int, rc: dict, bc: dict, radj, badj) -> list[int] | None:
    """Shortest alternating walk ``u, v, ..., u`` ending on a blue edge,
    found by breadth-first search over (vertex, colour) states; discarded if
    it reuses an edge more often than available."""
    start = (v, 1)
    prev = {start: None}
    queue = deque([start])
    goal = None
    while queue and goal is None:
        x, colour = queue.popleft()
        nbrs, counts = (badj[x], bc) if colour else (radj[x], rc)
        for y in nbrs:
            if not counts.get(pair(x, y)):
                continue
            state = (y, 1 - colour)
            if state in prev:
                continue
            prev[state] = (x, colour)
            if y == u and colour == 1:
                goal = state
                break
            queue.append(state)
    if goal is None:
        return None
    walk = []
    s = goal
    while s is not None:
        walk.append(s[0])
        s = prev[s]
    walk = [u] + walk[::-1][:-1]
    use_r, use_b = {}, {}
    for i in range(len(walk)):
        p = pair(walk[i], walk[(i + 1) % len(walk)])
        d = use_r if i % 2 == 0 else use_b
        d[p] = d.get(p, 0) + 1
    if any(k > rc.get(p, 0) for p, k in use_r.items()) or any(k > bc.get(p, 0) for p, k in use_b.items()):
        return None
    return walk


def _close_walk(u: int, v: int, rc: dict, bc: dict, radj, badj) -> list[int]:
    """Follow unused edges of alternating colour until back at ``u`` on a
    blue edge; every vertex has as many red as blue edges, so the walk
    cannot get stuck before that."""
    rc, bc = dict(rc), dict(bc)
    rc[pair(u, v)] -= 1
    walk = [u, v]
    x, colour = v, 1
    while True:
        nbrs, counts = (badj[x], bc) if colour else (radj[x], rc)
        ys = [y for y in nbrs if counts.get(pair(x, y))]
        y = u if colour and u in ys else ys[0]
        counts[pair(x, y)] -= 1
        if colour and y == u:
            return walk
        walk.append(y)
        x, colour = y, 1 - colour


def _greedy(n: int, red: Multigraph, blue: Multigraph) -> list[list[int]]:
    rc, bc = red.as_dict(), blue.as_dict()
    radj, badj = _adjacency(n, red), _adjacency(n, blue)
    out = []
    while any(rc.values()):
        best = None
        for p, k in sorted(rc.items()):
            if not k:
                continue
            for u, v in (p, p[::-1]):
                w = _shortest_from(n, u, v, rc, bc, radj, badj)
                if w is not None and (best is None or len(w) < len(best)):
                    best = w
        if best is None:
            p = min(q for q, k in rc.items() if k)
            best = _close_walk(p[0], p[1], rc, bc, radj, badj)
        k = len(best)
        for i in range(k):
            q = pair(best[i], best[(i + 1) % k])
            (rc if i % 2 == 0 else bc)[q] -= 1
        out.append(best)
    return out


def psi(g: Multigraph, h: Multigraph, mode: str = "exact",
        cap: int = EXACT_CAP) -> tuple[int, SymmetricCircuitPartition]:
    """``δ/2 − m`` with the partition attaining it.

    ``exact`` maximizes the number of circuits (and so gives the true
    unconstrained distance); ``greedy`` takes short circuits first and only
    reports the resulting value.
    """
    red, blue = _sides(g, h)
    size = red.num_edges + blue.num_edges
    if mode == "exact":
        if size > cap:
            raise TooLarge(f"|G Δ H| = {size} exceeds the exact-search cap {cap}")
        circuits = _exact(g.n, red, blue)
    elif mode == "greedy":
        circuits = _greedy(g.n, red, blue)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    part = SymmetricCircuitPartition(circuits)
    return size // 2 - part.m, part


# -- exact search over the reconfiguration graph ------------------------------

def _tree(cc) -> FragmentTree | None:
    if cc is None or isinstance(cc, FragmentTree):
        return cc
    return build_fragment_tree(cc)


def _member_after(after: Multigraph, tree: FragmentTree | None, removed) -> bool:
    if tree is None:
        return True
    touched = set()
    for a, b in removed:
        touched.update(tree.common_fragments(a, b))
    return all(is_connected(after, c) for c in touched)


def _neighbours(g: Multigraph, tree: FragmentTree | None) -> Iterator[Multigraph]:
    for f, after in all_flips(g):
        if _member_after(after, tree, f.removed):
            yield after


def exact_distance(g: Multigraph, h: Multigraph, s=None, cc=None,
                   cap: int = STATE_CAP) -> int:
    """Fewest flips from ``g`` to ``h`` (correct flips when ``cc`` is given),
    by bidirectional breadth-first search. Flips are reversible, and so are
    correct flips between members, so both frontiers expand the same way."""
    if g.n != h.n or g.degrees() != h.degrees():
        raise DegreeMismatch("graphs realize different degree vectors")
    tree = _tree(cc)
    if tree is not None:
        s = g.degrees() if s is None else tuple(s)
        if not check_membership(g, s, tree) or not check_membership(h, s, tree):
            raise NotMember("both graphs must be members of the family")
    if g == h:
        return 0
    dist = [{canonical_key(g): 0}, {canonical_key(h): 0}]
    frontier = [[g], [h]]
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = dist[side], dist[1 - side]
        nxt = []
        best = None
        for x in frontier[side]:
            dx = mine[canonical_key(x)]
            for y in _neighbours(x, tree):
                key = canonical_key(y)
                if key in other:
                    total = dx + 1 + other[key]
                    best = total if best is None else min(best, total)
                if key not in mine:
                    mine[key] = dx + 1
                    nxt.append(y)
        if best is not None:
            return best
        if len(dist[0]) + len(dist[1]) > cap:
            raise TooLarge(f"search visited more than {cap} states")
        frontier[side] = nxt
    raise NotMember("target is unreachable")  # pragma: no cover


# -- enumeration ------------------------------------------------------------------

@dataclass
class EnumerationStats:
    emitted: int = 0
    max_delay: float = 0.0


def enumerate_members(s, cc: NestedCollection | FragmentTree,
                      stats: EnumerationStats | None = None) -> Iterator[Multigraph]:
    """Every member of the constrained family, each exactly once.

    Depth-first traversal over correct flips from one realization; the
    reconfiguration graph is connected so nothing is missed. Graphs are
    yielded as soon as they are discovered.
    """
    tree = _tree(cc)
    start = realize(tuple(s), tree)
    seen = {canonical_key(start)}
    stack = [start]
    last = time.perf_counter()
    yield start
    if stats is not None:
        stats.emitted = 1
    while stack:
        x = stack.pop()
        for f, y in all_flips(x):
            key = canonical_key(y)
            if key in seen or not _member_after(y, tree, f.removed):
                continue
            seen.add(key)
            stack.append(y)
            if stats is not None:
                now = time.perf_counter()
                stats.max_delay = max(stats.max_delay, now - last)
                stats.emitted += 1
            yield y
            last = time.perf_counter()

"""Transforming one connected multigraph into another with the same degrees.

Each improvement step uses at most two flips, keeps the graph connected,
only removes surplus copies (never drops an edge below its multiplicity in
``G ∩ H``), and shrinks the symmetric difference by at least two. Iterating
gives at most ``δ(G, H)`` flips, so at most four times the optimum (a flip
changes the symmetric difference by at most four).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import AlreadyEqual, DegreeMismatch, NotConnected
from .multigraph import (
    Flip, FlipSequence, Multigraph, apply_flip, bridges, components, delta,
    intersect, is_connected, minus, pair,
)


@dataclass
class Improvement:
    flips: list[Flip]
    branch: str          # "cycle", "leaf", "detour" or "search"

    def __len__(self):
        return len(self.flips)

    def __iter__(self):
        return iter(self.flips)


@dataclass
class TransformReport:
    flips: FlipSequence
    delta_initial: int
    delta_final: int
    goodedge_violations: int = 0
    branches: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.flips)


def _floor_ok(k: Multigraph, floor: Multigraph) -> bool:
    return all(k.m(*p) >= r for p, r in floor.pairs())


def _acceptable(g: Multigraph, h: Multigraph, flips: list[Flip]) -> bool:
    """Replay ``flips`` checking connectivity, the good-edge floor and a
    symmetric-difference drop of at least two."""
    floor = intersect(g, h)
    k = g
    try:
        for f in flips:
            k = apply_flip(k, f)
            if not is_connected(k) or not _floor_ok(k, floor):
                return False
    except ValueError:
        return False
    return delta(k, h) <= delta(g, h) - 2


def _cycle_flip(g: Multigraph, h: Multigraph, surplus: Multigraph, missing: Multigraph):
    """A surplus edge ``uv`` on a cycle flipped with a surplus ``wx`` so that
    ``uw`` or ``vx`` is a missing edge."""
    br = bridges(g)
    cands = [p for p, _ in surplus.pairs()]
    for p in cands:
        if p in br:
            continue
        for u, v in (p, p[::-1]):
            for q in cands:
                for w, x in (q, q[::-1]):
                    if w in (u, v) or x in (u, v):
                        continue
                    if missing.m(u, w) or missing.m(v, x):
                        f = Flip(u, v, w, x)
                        if _acceptable(g, h, [f]):
                            return f
    return None


def _tree_path(adj: dict[int, list[int]], src: int, dst: int) -> list[int]:
    prev = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _bridge_flips(g: Multigraph, h: Multigraph, surplus: Multigraph, missing: Multigraph):
    """Every surplus edge is a bridge: contract the components of ``G ∩ H``
    into a tree and reconnect a leaf component directly or via a detour."""
    comps = components(intersect(g, h))
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    adj: dict[int, list[int]] = {i: [] for i in range(len(comps))}
    out_edges: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(comps))}
    for (x, y), _ in surplus.pairs():
        cx, cy = comp_of[x], comp_of[y]
        adj[cx].append(cy)
        adj[cy].append(cx)
        out_edges[cx].append((x, y))
        out_edges[cy].append((y, x))
    leaves = [i for i in range(len(comps)) if len(adj[i]) == 1]
    for s1 in leaves:
        ((v1, v2),) = out_edges[s1]
        for v3 in sorted(t for t in range(g.n) if missing.m(v1, t)):
            s3 = comp_of[v3]
            path = _tree_path(adj, s1, s3)
            on_path = set(path)
            ws = sorted(t for t in range(g.n) if surplus.m(v3, t))
            # prefer a far endpoint off the S1-S3 path: one flip suffices
            ws.sort(key=lambda t: comp_of[t] in on_path)
            for w in ws:
                if comp_of[w] not in on_path:
                    f = Flip(v1, v2, v3, w)
                    if _acceptable(g, h, [f]):
                        return Improvement([f], "leaf")
                    continue
                toward_s1 = path[-2]
                for v3b, v4 in out_edges[s3]:
                    if (v3b, v4) == (v3, w) or comp_of[v4] == toward_s1:
                        continue
                    f1 = Flip(v1, v2, v3b, v4)
                    seq = [f1] if v3b == v3 else [f1, Flip(v1, v3b, v3, w)]
                    if _acceptable(g, h, seq):
                        return Improvement(seq, "detour")
    return None


def _search(g: Multigraph, h: Multigraph, surplus: Multigraph):
    """Exhaustive fallback over one and two surplus-edge flips."""
    def candidates(k, surp):
        items = [p for p, _ in surp.pairs()]
        for i, (a, b) in enumerate(items):
            for c, d in items[i:]:
                if (a, b) == (c, d) and surp.m(a, b) < 2:
                    continue
                for f in (Flip(a, b, c, d), Flip(a, b, d, c)):
                    if f.is_loop_free():
                        yield f

    for f in candidates(g, surplus):
        if _acceptable(g, h, [f]):
            return Improvement([f], "search")
    floor = intersect(g, h)
    for f in candidates(g, surplus):
        k = apply_flip(g, f)
        if not is_connected(k) or delta(k, h) > delta(g, h):
            continue
        for f2 in candidates(k, minus(k, floor)):
            if _acceptable(g, h, [f, f2]):
                return Improvement([f, f2], "search")
    return None


def improve_step(g: Multigraph, h: Multigraph) -> Improvement:
    """One or two flips taking ``g`` closer to ``h`` by at least two."""
    if g.degrees() != h.degrees():
        raise DegreeMismatch("graphs realize different degree vectors")
    if g == h:
        raise AlreadyEqual("graphs are already equal")
    surplus = minus(g, h)
    missing = minus(h, g)
    f = _cycle_flip(g, h, surplus, missing)
    if f is not None:
        return Improvement([f], "cycle")
    if not (bridges(g) >= {p for p, _ in surplus.pairs()}):
        # a surplus edge lies on a cycle but no single cycle flip worked
        step = _search(g, h, surplus)
    else:
        step = _bridge_flips(g, h, surplus, missing) or _search(g, h, surplus)
    if step is None:
        raise RuntimeError("no improving step found; are both graphs connected?")
    return step


def transform_connected(g: Multigraph, h: Multigraph) -> TransformReport:
    """Flip sequence from ``g`` to ``h`` keeping every intermediate graph
    connected; at most ``δ(g, h)`` flips."""
    if g.n != h.n or g.degrees() != h.degrees():
        raise DegreeMismatch("graphs realize different degree vectors")
    if not is_connected(g) or not is_connected(h):
        raise NotConnected("both graphs must be connected")
    d0 = delta(g, h)
    floor = intersect(g, h)
    seq = FlipSequence()
    branches = []
    violations = 0
    cur = g
    while cur != h:
        step = improve_step(cur, h)
        branches.append(step.branch)
        for f in step:
            cur = apply_flip(cur, f)
            seq.append(f)
            if not _floor_ok(cur, floor):
                violations += 1
    return TransformReport(seq, d0, delta(cur, h), violations, branches)

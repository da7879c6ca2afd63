"""Loop-free multigraphs on labeled vertices, flips and multiset algebra.

Vertices are the integers ``0..n-1``. An edge is an unordered pair stored
with the smaller label first; its multiplicity is a positive integer.
Graphs are immutable: every modifying operation returns a new graph.
"""

from __future__ import annotations

import struct
from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import InvalidGraph, LoopCreation, MissingEdge, SizeMismatch

Pair = tuple[int, int]

MAX_MULTIPLICITY = 2**64 - 1


def pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


class Multigraph:
    """Immutable loop-free multigraph.

    ``mult`` may be a mapping ``{(u, v): k}`` or an iterable of ``(u, v)``
    or ``(u, v, k)`` entries; repeated entries accumulate.
    """

    __slots__ = ("n", "_mult", "_pairs", "_deg", "_adj", "_key")

    def __init__(self, n: int, mult: Mapping[Pair, int] | Iterable = ()):
        if n < 0:
            raise InvalidGraph(f"vertex count must be non-negative, got {n}")
        items = mult.items() if isinstance(mult, Mapping) else _entries(mult)
        acc: dict[Pair, int] = {}
        for (u, v), k in items:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise InvalidGraph(f"loop at vertex {u}")
            if k < 0:
                raise InvalidGraph(f"negative multiplicity {k} for ({u}, {v})")
            if k:
                p = pair(u, v)
                acc[p] = acc.get(p, 0) + k
        for p, k in acc.items():
            if k > MAX_MULTIPLICITY:
                raise InvalidGraph(f"multiplicity overflow on {p}")
        self.n = n
        self._mult = acc
        self._pairs = None
        self._deg = None
        self._adj = None
        self._key = None

    @classmethod
    def _raw(cls, n: int, mult: dict[Pair, int]) -> Multigraph:
        # trusted constructor: normalized keys, positive values
        g = object.__new__(cls)
        g.n = n
        g._mult = mult
        g._pairs = None
        g._deg = None
        g._adj = None
        g._key = None
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> Multigraph:
        return cls(n, edges)

    # -- queries ---------------------------------------------------------

    def m(self, u: int, v: int) -> int:
        return self._mult.get(pair(u, v), 0)

    def pairs(self) -> list[tuple[Pair, int]]:
        """``(pair, multiplicity)`` entries in lexicographic pair order."""
        if self._pairs is None:
            self._pairs = sorted(self._mult.items())
        return self._pairs

    def edges(self) -> Iterator[Pair]:
        """Edge occurrences, each pair repeated by its multiplicity."""
        for p, k in self.pairs():
            for _ in range(k):
                yield p

    @property
    def num_edges(self) -> int:
        return sum(self._mult.values())

    def degrees(self) -> tuple[int, ...]:
        if self._deg is None:
            deg = [0] * self.n
            for (u, v), k in self._mult.items():
                deg[u] += k
                deg[v] += k
            self._deg = tuple(deg)
        return self._deg

    def degree(self, v: int) -> int:
        return self.degrees()[v]

    def neighbors(self, v: int) -> frozenset[int]:
        if self._adj is None:
            adj: list[set[int]] = [set() for _ in range(self.n)]
            for u, w in self._mult:
                adj[u].add(w)
                adj[w].add(u)
            self._adj = tuple(frozenset(a) for a in adj)
        return self._adj[v]

    def as_dict(self) -> dict[Pair, int]:
        return dict(self._mult)

    def __contains__(self, p) -> bool:
        return pair(*p) in self._mult

    def __len__(self) -> int:
        return self.num_edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and self._mult == other._mult

    def __hash__(self) -> int:
        return hash(canonical_key(self))

    def __repr__(self) -> str:
        body = ", ".join(f"{u}-{v}" + (f"x{k}" if k > 1 else "") for (u, v), k in self.pairs())
        return f"Multigraph(n={self.n}, {{{body}}})"

    # -- derived graphs --------------------------------------------------

    def add(self, u: int, v: int, k: int = 1) -> Multigraph:
        if u == v:
            raise LoopCreation(f"edge ({u}, {v}) would be a loop")
        mult = dict(self._mult)
        p = pair(u, v)
        mult[p] = mult.get(p, 0) + k
        return Multigraph._raw(self.n, mult)

    def remove(self, u: int, v: int, k: int = 1) -> Multigraph:
        p = pair(u, v)
        have = self._mult.get(p, 0)
        if have < k:
            raise MissingEdge(f"edge {p} has multiplicity {have} < {k}")
        mult = dict(self._mult)
        if have == k:
            del mult[p]
        else:
            mult[p] = have - k
        return Multigraph._raw(self.n, mult)

    def induced(self, subset: Iterable[int]) -> Multigraph:
        """Edges with both endpoints in ``subset``, on the same vertex range."""
        s = set(subset)
        return Multigraph._raw(
            self.n, {p: k for p, k in self._mult.items() if p[0] in s and p[1] in s})

    def apply(self, flip: Flip) -> Multigraph:
        return apply_flip(self, flip)


def _entries(edges: Iterable):
    for e in edges:
        if len(e) == 2:
            yield (e[0], e[1]), 1
        elif len(e) == 3:
            yield (e[0], e[1]), e[2]
        else:
            raise InvalidGraph(f"edge entry must be (u, v) or (u, v, k), got {e!r}")


@dataclass(frozen=True)
class Flip:
    """The rewiring ``(ab, cd) -> (ac, bd)``."""

    a: int
    b: int
    c: int
    d: int

    @property
    def removed(self) -> tuple[Pair, Pair]:
        return pair(self.a, self.b), pair(self.c, self.d)

    @property
    def created(self) -> tuple[Pair, Pair]:
        return pair(self.a, self.c), pair(self.b, self.d)

    def inverse(self) -> Flip:
        return Flip(self.a, self.c, self.b, self.d)

    def is_loop_free(self) -> bool:
        return self.a != self.b and self.c != self.d and self.a != self.c and self.b != self.d

    def relabel(self, mapping) -> Flip:
        return Flip(mapping[self.a], mapping[self.b], mapping[self.c], mapping[self.d])

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]


def apply_flip(g: Multigraph, f: Flip) -> Multigraph:
    if f.a == f.b or f.c == f.d:
        raise LoopCreation(f"source edges of {f} are loops")
    if f.a == f.c or f.b == f.d:
        raise LoopCreation(f"{f} would create a loop")
    mult = dict(g._mult)
    for p in f.removed:
        k = mult.get(p, 0)
        if k == 0:
            raise MissingEdge(f"{f}: edge {p} not present")
        if k == 1:
            del mult[p]
        else:
            mult[p] = k - 1
    for p in f.created:
        mult[p] = mult.get(p, 0) + 1
    return Multigraph._raw(g.n, mult)


@dataclass
class FlipSequence:
    """Ordered flips; ``backward[i]`` marks a flip obtained by inverting one
    computed on the target side."""

    flips: list[Flip] = field(default_factory=list)
    backward: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.backward:
            self.backward = [False] * len(self.flips)
        if len(self.backward) != len(self.flips):
            raise ValueError("direction tags must match flips")

    def append(self, f: Flip, backward: bool = False) -> None:
        self.flips.append(f)
        self.backward.append(backward)

    def extend(self, other: FlipSequence) -> None:
        self.flips.extend(other.flips)
        self.backward.extend(other.backward)

    def __len__(self) -> int:
        return len(self.flips)

    def __iter__(self) -> Iterator[Flip]:
        return iter(self.flips)

    def __getitem__(self, i):
        return self.flips[i]

    def inverted(self) -> FlipSequence:
        """The sequence undoing this one: reversed order, each flip inverted."""
        return FlipSequence([f.inverse() for f in reversed(self.flips)],
                            [not b for b in reversed(self.backward)])

    def replay(self, g: Multigraph) -> Iterator[Multigraph]:
        """Yield ``g`` and every graph obtained after each flip."""
        yield g
        for f in self.flips:
            g = apply_flip(g, f)
            yield g

    def apply(self, g: Multigraph) -> Multigraph:
        for f in self.flips:
            g = apply_flip(g, f)
        return g


# -- multiset algebra ------------------------------------------------------

def _check_size(g: Multigraph, h: Multigraph) -> None:
    if g.n != h.n:
        raise SizeMismatch(f"graphs have {g.n} and {h.n} vertices")


def symmetric_difference(g: Multigraph, h: Multigraph) -> tuple[Multigraph, int]:
    """``G Δ H`` as a graph, and its total multiplicity."""
    _check_size(g, h)
    out = {}
    for p in g._mult.keys() | h._mult.keys():
        r = abs(g._mult.get(p, 0) - h._mult.get(p, 0))
        if r:
            out[p] = r
    return Multigraph._raw(g.n, out), sum(out.values())


def delta(g: Multigraph, h: Multigraph) -> int:
    _check_size(g, h)
    return sum(abs(g._mult.get(p, 0) - h._mult.get(p, 0)) for p in g._mult.keys() | h._mult.keys())


def minus(g: Multigraph, h: Multigraph) -> Multigraph:
    _check_size(g, h)
    out = {}
    for p, k in g._mult.items():
        r = k - h._mult.get(p, 0)
        if r > 0:
            out[p] = r
    return Multigraph._raw(g.n, out)


def intersect(g: Multigraph, h: Multigraph) -> Multigraph:
    _check_size(g, h)
    out = {}
    for p, k in g._mult.items():
        r = min(k, h._mult.get(p, 0))
        if r:
            out[p] = r
    return Multigraph._raw(g.n, out)


def union(g: Multigraph, h: Multigraph) -> Multigraph:
    """Multiset sum ``G ⊎ H``."""
    _check_size(g, h)
    out = dict(g._mult)
    for p, k in h._mult.items():
        out[p] = out.get(p, 0) + k
    return Multigraph._raw(g.n, out)


# -- connectivity ----------------------------------------------------------

def is_connected(g: Multigraph, subset: Iterable[int] | None = None) -> bool:
    """Whether the subgraph induced by ``subset`` (default: all vertices) is
    connected. Empty and singleton subsets are connected."""
    s = set(range(g.n)) if subset is None else set(subset)
    if len(s) <= 1:
        return True
    start = next(iter(s))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in s and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(s)


def components(g: Multigraph, subset: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components of the induced subgraph, ordered by smallest label."""
    s = set(range(g.n)) if subset is None else set(subset)
    comps = []
    seen: set[int] = set()
    for v in sorted(s):
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for w in g.neighbors(x):
                if w in s and w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def bridges(g: Multigraph) -> set[Pair]:
    """Pairs whose single edge is a bridge. Parallel pairs never are."""
    disc = [-1] * g.n
    low = [0] * g.n
    out: set[Pair] = set()
    clock = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        stack = [(root, -1, iter(sorted(g.neighbors(root))))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, v, iter(sorted(g.neighbors(w)))))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent] and g.m(parent, v) == 1:
                    out.add(pair(parent, v))
    return out


def non_bridge_edge_in(g: Multigraph, pool: Multigraph | Iterable[Pair]) -> Pair | None:
    """First pair of ``pool`` (lexicographic) lying on a cycle of ``g``."""
    br = bridges(g)
    keys = (p for p, _ in pool.pairs()) if isinstance(pool, Multigraph) else sorted(
        pair(*p) for p in pool)
    for p in keys:
        if g.m(*p) >= 1 and p not in br:
            return p
    return None


def canonical_key(g: Multigraph) -> bytes:
    """Byte encoding equal exactly for equal labeled multigraphs."""
    if g._key is None:
        flat = [g.n]
        for (u, v), k in g.pairs():
            flat.extend((u, v, k))
        g._key = struct.pack(f"<{len(flat)}Q", *flat)
    return g._key


def all_flips(g: Multigraph) -> Iterator[tuple[Flip, Multigraph]]:
    """Every loop-free flip of ``g`` with its result. Both rewirings of each
    unordered pair of edge occurrences are produced; results may repeat."""
    items = g.pairs()
    for i, ((a, b), k1) in enumerate(items):
        for j in range(i, len(items)):
            (c, d), k2 = items[j]
            if i == j and k1 < 2:
                continue
            # (ab, cd) -> (ac, bd) and (ab, dc) -> (ad, bc)
            for f in (Flip(a, b, c, d), Flip(a, b, d, c)):
                if f.a != f.c and f.b != f.d:
                    yield f, apply_flip(g, f)

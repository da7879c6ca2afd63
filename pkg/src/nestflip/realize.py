"""Degree-deficit bounds, realizability and construction of realizations.

For a fragment ``C`` and a graph living on ``C`` that respects the degree
caps, the degree-deficit is the number of edge endpoints still missing.
``compute_bounds`` gives, per fragment, the smallest and largest deficit a
coherent graph (caps respected, every fragment below ``C`` connected) can
achieve; realizability of the whole instance reduces to those numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotRealizable, ParityMismatch, PreconditionViolated
from .fragments import (
    FragmentTree, NestedCollection, Node, build_fragment_tree, contract,
    removable_edge_inside,
)
from .multigraph import Multigraph, Pair, is_connected, pair


@dataclass(frozen=True)
class NodeBounds:
    u: int
    ell: int
    phi: int | None = None

    @property
    def parity(self) -> int:
        return self.u % 2


@dataclass(frozen=True)
class CoherentGraph:
    node: Node
    graph: Multigraph
    deficit: int


@dataclass(frozen=True)
class Realizability:
    ok: bool
    bounds: dict
    reason: str | None = None
    node: Node | None = None

    def __bool__(self):
        return self.ok


def _as_tree(cc) -> FragmentTree:
    return cc if isinstance(cc, FragmentTree) else build_fragment_tree(cc)


def compute_bounds(tree: FragmentTree, s) -> dict[Node, NodeBounds]:
    out: dict[Node, NodeBounds] = {}
    for c in reversed(tree.nodes):
        total = sum(s[v] for v in c)
        u = total - (2 * len(c) - 2)
        kids = tree.children[c]
        if not kids:
            (v,) = c
            out[c] = NodeBounds(u=s[v], ell=s[v])
            continue
        usum = sum(out[k].u for k in kids)
        # child j excluded from the u-sum: ell_j - (usum - u_j)
        phi = max(out[k].ell + out[k].u for k in kids) - usum
        if phi >= 0:
            ell = phi
        else:
            ell = phi % 2
        out[c] = NodeBounds(u=u, ell=ell, phi=phi)
    return out


def _fmt(node: Node, tree: FragmentTree) -> str:
    return "V" if node == tree.root else "{" + ",".join(map(str, sorted(node))) + "}"


def is_realizable(s, cc: NestedCollection | FragmentTree) -> Realizability:
    """Decide whether some loop-free multigraph realizes ``s`` with every
    fragment connected.

    Every fragment other than the ground set needs ``u >= 1`` (it must send
    at least one edge out; this includes single vertices when ``n >= 2``),
    and the ground set needs ``u >= 0`` and ``ell == 0``.
    """
    tree = _as_tree(cc)
    s = tuple(s)
    if len(s) != tree.n:
        raise PreconditionViolated(f"degree vector has length {len(s)}, expected {tree.n}")
    if tree.n == 0:
        return Realizability(True, {})
    bounds = compute_bounds(tree, s)
    for c in reversed(tree.nodes):
        if c != tree.root and bounds[c].u < 1:
            return Realizability(False, bounds, f"u({_fmt(c, tree)}) = {bounds[c].u} < 1", c)
    root = bounds[tree.root]
    if root.u < 0:
        return Realizability(False, bounds, f"u(V) = {root.u} < 0", tree.root)
    if root.ell != 0:
        return Realizability(False, bounds, f"ell(V) = {root.ell} != 0", tree.root)
    return Realizability(True, bounds)


# -- construction ------------------------------------------------------------------
#
# Working graphs are plain dicts {pair: multiplicity} restricted to one
# fragment; they are wrapped into Multigraph only at the boundary.

def _inc(mult: dict, u: int, v: int, k: int = 1) -> None:
    p = pair(u, v)
    mult[p] = mult.get(p, 0) + k


def _dec(mult: dict, p: Pair) -> None:
    if mult[p] == 1:
        del mult[p]
    else:
        mult[p] -= 1


def _degrees(mult: dict, vertices) -> dict[int, int]:
    deg = dict.fromkeys(vertices, 0)
    for (u, v), k in mult.items():
        deg[u] += k
        deg[v] += k
    return deg


def _check_lower(tree: FragmentTree, bounds, node: Node) -> None:
    if bounds[node].u < 0:
        raise PreconditionViolated(f"u({_fmt(node, tree)}) = {bounds[node].u} < 0")
    for c in tree.subtree(node)[1:]:
        if bounds[c].u < 1:
            raise PreconditionViolated(f"u({_fmt(c, tree)}) = {bounds[c].u} < 1")


def _max_deficit(tree: FragmentTree, s, bounds, node: Node) -> dict:
    kids = tree.children[node]
    if not kids:
        return {}
    mult: dict = {}
    for ch in kids:
        mult.update(_max_deficit(tree, s, bounds, ch))
    deg = _degrees(mult, node)
    groups = [sorted(ch) for ch in kids]
    caps = [bounds[ch].u for ch in kids]
    while len(groups) > 1:
        # join a group of largest capacity to one of smallest capacity
        i = max(range(len(caps)), key=lambda t: (caps[t], -t))
        j = min((t for t in range(len(caps)) if t != i), key=lambda t: (caps[t], t))
        x = next(v for v in groups[i] if s[v] > deg[v])
        y = next(v for v in groups[j] if s[v] > deg[v])
        _inc(mult, x, y)
        deg[x] += 1
        deg[y] += 1
        merged = sorted(groups[i] + groups[j])
        cap = caps[i] + caps[j] - 2
        for t in sorted((i, j), reverse=True):
            del groups[t]
            del caps[t]
        groups.append(merged)
        caps.append(cap)
    return mult


def _decrease(tree: FragmentTree, s, bounds, node: Node, mult: dict) -> dict:
    """Return a coherent graph on ``node`` with deficit two less than ``mult``."""
    deg = _degrees(mult, node)
    short = [v for v in sorted(node) if s[v] > deg[v]]
    if len(short) >= 2:
        _inc(mult, short[0], short[1])
        return mult
    if not short or s[short[0]] - deg[short[0]] < 2:
        raise PreconditionViolated(f"deficit of {_fmt(node, tree)} cannot drop by two")
    v = short[0]
    home = tree.child_containing(node, v)
    child_of = {x: ch for ch in tree.children[node] for x in ch}
    crossing = sorted(p for p in mult if child_of[p[0]] != child_of[p[1]])

    # an inter-child edge away from v's child: reroute both ends to v
    for p in crossing:
        if p[0] not in home and p[1] not in home:
            _dec(mult, p)
            _inc(mult, v, p[0])
            _inc(mult, v, p[1])
            return mult
    # an inter-child edge leaving v's child at another vertex x
    for x, y in crossing:
        if x in home and x != v or y in home and y != v:
            inner, outer = (x, y) if x in home else (y, x)
            _dec(mult, (x, y))
            _inc(mult, v, inner)
            _inc(mult, v, outer)
            return mult

    # star centered at v: every crossing edge is v-w for w outside home
    for ch in tree.children[node]:
        if ch == home:
            continue
        sj = sum(k for p, k in mult.items() if (p[0] in ch) != (p[1] in ch))
        if sj < bounds[ch].u:
            sub = Multigraph._raw(tree.n, {p: k for p, k in mult.items()
                                           if p[0] in ch and p[1] in ch})
            e = removable_edge_inside(sub, tree, ch)
            if e is None:
                raise PreconditionViolated(f"no cycle inside {_fmt(ch, tree)}")
            _dec(mult, e)
            _inc(mult, v, e[0])
            _inc(mult, v, e[1])
            return mult

    if tree.is_leaf(home):
        raise PreconditionViolated(f"deficit of {_fmt(node, tree)} is already minimal")
    inside = {p: k for p, k in mult.items() if p[0] in home and p[1] in home}
    outside = {p: k for p, k in mult.items() if p[0] not in home and p[1] not in home}
    partners = []
    for p in crossing:
        w = p[1] if p[0] == v else p[0]
        partners.extend([w] * mult[p])
    inside = _decrease(tree, s, bounds, home, inside)
    out = outside
    out.update(inside)
    deg = _degrees(inside, home)
    for w in partners:
        x = next(t for t in sorted(home) if s[t] > deg[t])
        _inc(out, x, w)
        deg[x] += 1
    return out


def _validate(tree: FragmentTree, s, node: Node, g: Multigraph, deficit: int) -> None:
    deg = g.degrees()
    for v in node:
        if deg[v] > s[v]:
            raise AssertionError(f"vertex {v} exceeds its degree {s[v]}")
    if sum(s[v] - deg[v] for v in node) != deficit:
        raise AssertionError("deficit bookkeeping broken")
    for c in tree.subtree(node):
        if not is_connected(g, c):
            raise AssertionError(f"fragment {_fmt(c, tree)} disconnected")


def realize_max_deficit(tree: FragmentTree, s, node: Node) -> CoherentGraph:
    """A coherent graph on ``node`` whose deficit is the upper bound ``u``."""
    s = tuple(s)
    bounds = compute_bounds(tree, s)
    _check_lower(tree, bounds, node)
    g = Multigraph(tree.n, _max_deficit(tree, s, bounds, node))
    _validate(tree, s, node, g, bounds[node].u)
    return CoherentGraph(node, g, bounds[node].u)


def realize_with_deficit(tree: FragmentTree, s, node: Node, target: int) -> CoherentGraph:
    """A coherent graph on ``node`` with deficit exactly ``target``."""
    s = tuple(s)
    bounds = compute_bounds(tree, s)
    _check_lower(tree, bounds, node)
    b = bounds[node]
    if (target - b.u) % 2:
        raise ParityMismatch(f"target {target} and u = {b.u} differ in parity")
    if not b.ell <= target <= b.u:
        raise PreconditionViolated(f"target {target} outside [{b.ell}, {b.u}]")
    mult = _max_deficit(tree, s, bounds, node)
    for _ in range((b.u - target) // 2):
        mult = _decrease(tree, s, bounds, node, mult)
    g = Multigraph(tree.n, mult)
    _validate(tree, s, node, g, target)
    return CoherentGraph(node, g, target)


def realize(s, cc: NestedCollection | FragmentTree) -> Multigraph:
    """Some graph realizing ``s`` in which every fragment is connected."""
    tree = _as_tree(cc)
    verdict = is_realizable(s, tree)
    if not verdict:
        raise NotRealizable(verdict.reason)
    if tree.n == 0:
        return Multigraph(0)
    return realize_with_deficit(tree, s, tree.root, 0).graph


def crossing_count(g: Multigraph, node: Node) -> int:
    """Edges with exactly one endpoint in ``node``."""
    return sum(k for (u, v), k in g.pairs() if (u in node) != (v in node))


def deficit_bounds_hold(g: Multigraph, tree: FragmentTree, s) -> bool:
    bounds = compute_bounds(tree, tuple(s))
    return all(bounds[c].ell <= crossing_count(g, c) <= bounds[c].u for c in tree.nodes)

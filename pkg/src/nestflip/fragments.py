"""Laminar families, the tree of fragments, and quotient views of a graph.

A fragment tree node is identified by its vertex set (a ``frozenset``);
the family is laminar so no two nodes share a set.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    EmptySet, LeafNode, NoProvenance, NotExtensible, NotLaminar,
    PreconditionViolated, UnknownVertex,
)
from .multigraph import (
    Flip, Multigraph, Pair, apply_flip, bridges, components, intersect,
    is_connected, minus, pair,
)

Node = frozenset


def _order_key(s: frozenset):
    return (-len(s), sorted(s))


@dataclass(frozen=True)
class NestedCollection:
    n: int
    sets: tuple[frozenset, ...]

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def nontrivial(self) -> list[frozenset]:
        """Sets other than the ground set and the singletons."""
        return [s for s in self.sets if 1 < len(s) < self.n]


def validate_and_normalize(sets: Iterable[Iterable[int]], n: int) -> NestedCollection:
    """Check laminarity and add the ground set and all singletons."""
    family: set[frozenset] = set()
    for raw in sets:
        s = frozenset(raw)
        if not s:
            raise EmptySet("fragments must be non-empty")
        bad = [v for v in s if not (isinstance(v, int) and 0 <= v < n)]
        if bad:
            raise UnknownVertex(f"vertex {bad[0]!r} outside 0..{n - 1}")
        family.add(s)
    ordered = sorted(family, key=_order_key)
    for x, y in combinations(ordered, 2):
        inter = x & y
        if inter and inter != x and inter != y:
            raise NotLaminar(x, y)
    if n > 0:
        family.add(frozenset(range(n)))
    family.update(frozenset([v]) for v in range(n))
    return NestedCollection(n, tuple(sorted(family, key=_order_key)))


@dataclass(eq=False)
class FragmentTree:
    n: int
    root: Node
    parent: dict[Node, Node | None]
    children: dict[Node, tuple[Node, ...]]
    height: int
    nodes: tuple[Node, ...]          # breadth-first, children by smallest label
    depth: dict[Node, int] = field(default_factory=dict)
    ancestors: tuple[tuple[Node, ...], ...] = ()   # per vertex, leaf up to root

    def is_leaf(self, node: Node) -> bool:
        return not self.children[node]

    def leaf(self, v: int) -> Node:
        return self.ancestors[v][0]

    @property
    def internal_nodes(self) -> tuple[Node, ...]:
        return tuple(c for c in self.nodes if self.children[c])

    @property
    def fragments(self) -> tuple[Node, ...]:
        return self.nodes

    def subtree(self, node: Node) -> list[Node]:
        """Nodes of the subtree rooted at ``node``, breadth-first."""
        out = [node]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def child_containing(self, node: Node, v: int) -> Node:
        for ch in self.children[node]:
            if v in ch:
                return ch
        raise UnknownVertex(f"vertex {v} not below {sorted(node)}")

    def common_fragments(self, u: int, v: int) -> list[Node]:
        """Non-singleton fragments containing both ``u`` and ``v``."""
        return [c for c in self.ancestors[u] if v in c and len(c) > 1]


def build_fragment_tree(cc: NestedCollection) -> FragmentTree:
    n = cc.n
    if n == 0:
        root = frozenset()
        return FragmentTree(0, root, {root: None}, {root: ()}, 0, (root,), {root: 1}, ())
    ordered = sorted(cc.sets, key=_order_key)
    root = ordered[0]
    parent: dict[Node, Node | None] = {root: None}
    kids: dict[Node, list[Node]] = {root: []}
    for s in ordered[1:]:
        cur = root
        while True:
            nxt = next((ch for ch in kids[cur] if s <= ch), None)
            if nxt is None:
                break
            cur = nxt
        parent[s] = cur
        kids[cur].append(s)
        kids[s] = []
    children = {c: tuple(sorted(ks, key=min)) for c, ks in kids.items()}
    nodes = [root]
    depth = {root: 1}
    i = 0
    while i < len(nodes):
        for ch in children[nodes[i]]:
            depth[ch] = depth[nodes[i]] + 1
            nodes.append(ch)
        i += 1
    ancestors = []
    for v in range(n):
        chain = [frozenset([v])]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        ancestors.append(tuple(chain))
    return FragmentTree(n, root, parent, children, max(depth.values()), tuple(nodes),
                        depth, tuple(ancestors))


def tree_from_sets(sets: Iterable[Iterable[int]], n: int) -> FragmentTree:
    return build_fragment_tree(validate_and_normalize(sets, n))


# -- membership and correctness ---------------------------------------------------

def fragments_connected(g: Multigraph, tree: FragmentTree) -> bool:
    return all(is_connected(g, c) for c in tree.nodes if len(c) > 1)


def check_membership(g: Multigraph, s, tree: FragmentTree) -> bool:
    """Whether ``g`` realizes ``s`` with every fragment inducing a connected graph."""
    if g.n != tree.n or tuple(g.degrees()) != tuple(s):
        return False
    return fragments_connected(g, tree)


def is_correct_flip(g: Multigraph, tree: FragmentTree, f: Flip) -> bool:
    """Whether applying ``f`` keeps every fragment connected.

    Only fragments that lose an edge can become disconnected, so those are
    the ones rechecked; connectivity is recomputed from scratch for each.
    """
    after = apply_flip(g, f)
    touched = set(tree.common_fragments(f.a, f.b)) | set(tree.common_fragments(f.c, f.d))
    return all(is_connected(after, c) for c in touched)


# -- quotient views ----------------------------------------------------------------

@dataclass(eq=False)
class ContractedView:
    base: Multigraph
    blocks: tuple[frozenset, ...]
    block_of: dict[int, int]
    qgraph: Multigraph
    provenance: dict[Pair, tuple[Pair, ...]]

    def block_index(self, v: int) -> int:
        return self.block_of[v]

    def index_of(self, block: frozenset) -> int:
        return self.blocks.index(block)


def quotient(g: Multigraph, blocks: Iterable[frozenset]) -> ContractedView:
    """Identify each block to a vertex; edges inside a block and edges
    leaving the union of blocks are dropped."""
    blocks = tuple(sorted(blocks, key=min))
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    prov: dict[Pair, list[Pair]] = {}
    for (u, v), k in g.pairs():
        bu = block_of.get(u)
        bv = block_of.get(v)
        if bu is None or bv is None or bu == bv:
            continue
        prov.setdefault(pair(bu, bv), []).extend([(u, v)] * k)
    qg = Multigraph._raw(len(blocks), {p: len(lst) for p, lst in prov.items()})
    return ContractedView(g, blocks, block_of, qg, {p: tuple(l) for p, l in prov.items()})


def contract(g: Multigraph, tree: FragmentTree, node: Node) -> ContractedView:
    """``G↓C``: the graph on the children of ``node``."""
    if tree.is_leaf(node):
        raise LeafNode(f"{sorted(node)} is a leaf")
    return quotient(g, tree.children[node])


@dataclass(frozen=True, eq=False)
class WellStructuredSubtree:
    tree: FragmentTree
    nodes: frozenset

    def __eq__(self, other):
        return isinstance(other, WellStructuredSubtree) and self.nodes == other.nodes

    def __hash__(self):
        return hash(self.nodes)

    def leaves(self) -> tuple[Node, ...]:
        return tuple(sorted((c for c in self.nodes if not any(
            ch in self.nodes for ch in self.tree.children[c])), key=min))

    def inner(self) -> tuple[Node, ...]:
        return tuple(c for c in self.tree.nodes
                     if c in self.nodes and any(ch in self.nodes for ch in self.tree.children[c]))

    def is_full(self) -> bool:
        return len(self.nodes) == len(self.tree.nodes)

    def extensible_leaves(self) -> list[Node]:
        return [c for c in self.tree.nodes if c in self.nodes and self.tree.children[c]
                and not any(ch in self.nodes for ch in self.tree.children[c])]


def root_subtree(tree: FragmentTree) -> WellStructuredSubtree:
    return WellStructuredSubtree(tree, frozenset([tree.root]))


def full_subtree(tree: FragmentTree) -> WellStructuredSubtree:
    return WellStructuredSubtree(tree, frozenset(tree.nodes))


def is_well_structured(tree: FragmentTree, nodes: Iterable[Node]) -> bool:
    ns = frozenset(nodes)
    if tree.root not in ns:
        return False
    for c in ns:
        if c not in tree.parent:
            return False
        p = tree.parent[c]
        if p is not None and p not in ns:
            return False
        inside = [ch in ns for ch in tree.children[c]]
        if any(inside) and not all(inside):
            return False
    return True


def inherited(g: Multigraph, t1: WellStructuredSubtree) -> ContractedView:
    """``G⇓T'``: the quotient of ``g`` by the leaf sets of ``t1``."""
    return quotient(g, t1.leaves())


def extend(t1: WellStructuredSubtree, node: Node) -> tuple[WellStructuredSubtree, frozenset]:
    """Grow ``t1`` by the children of leaf ``node``; return the new subtree
    and the special blocks (those children)."""
    tree = t1.tree
    kids = tree.children.get(node)
    if node not in t1.nodes or not kids or any(ch in t1.nodes for ch in kids):
        raise NotExtensible(f"{sorted(node)} is not an expandable leaf of the subtree")
    return WellStructuredSubtree(tree, t1.nodes | frozenset(kids)), frozenset(kids)


def is_subtree_correct(g: Multigraph, t: WellStructuredSubtree) -> bool:
    """Whether every inner node of ``t`` induces a connected graph in ``G⇓T'``."""
    view = inherited(g, t)
    for c in t.inner():
        idx = [i for i, b in enumerate(view.blocks) if b <= c]
        if not is_connected(view.qgraph, idx):
            return False
    return True


def is_special_flip(view: ContractedView, special: Iterable[int], f: Flip) -> bool:
    """Special-flip test on block indices of ``view``.

    Both removed edges must touch the special set, neither created edge may
    have both endpoints outside it, and it must stay connected.
    """
    xs = set(special)
    if not f.is_loop_free():
        return False
    for p in f.removed:
        if p[0] not in xs and p[1] not in xs:
            return False
    for p in f.created:
        if p[0] not in xs and p[1] not in xs:
            return False
    return is_connected(apply_flip(view.qgraph, f), xs)


def lift_flip(view: ContractedView, f: Flip, prefer_bad: tuple[Multigraph, Multigraph] | None = None,
              prefer: Iterable[Pair] = ()) -> Flip:
    """Translate a flip on block indices into a flip of the base graph.

    Candidates among parallel base edges are taken in lexicographic order;
    pairs in ``prefer`` come first, then (with ``prefer_bad=(G, H)``) pairs
    with more copies in ``G`` than in ``H``.
    """
    preferred = {pair(*p) for p in prefer}
    used: dict[Pair, int] = {}

    def pick(x: int, y: int) -> tuple[int, int]:
        cands = view.provenance.get(pair(x, y), ())
        if not cands:
            raise NoProvenance(f"no base edge between blocks {x} and {y}")
        distinct = sorted(set(cands))

        def available(p):
            return view.base.m(*p) - used.get(p, 0) > 0

        def bad(p):
            g, h = prefer_bad
            return g.m(*p) - used.get(p, 0) > h.m(*p)

        order = [p for p in distinct if p in preferred and available(p)]
        if prefer_bad is not None:
            order += [p for p in distinct if p not in preferred and available(p) and bad(p)]
        order += [p for p in distinct if available(p)]
        if not order:
            raise NoProvenance(f"base edges between blocks {x} and {y} exhausted")
        p = order[0]
        used[p] = used.get(p, 0) + 1
        u, v = p
        return (u, v) if view.block_of[u] == x else (v, u)

    a, b = pick(f.a, f.b)
    c, d = pick(f.c, f.d)
    return Flip(a, b, c, d)


# -- removable edges -------------------------------------------------------------

def _crossing(g: Multigraph, node: Node) -> int:
    return sum(g.degree(v) for v in node) - 2 * g.induced(node).num_edges


def _cycle_edge(q: Multigraph, pool: Multigraph, block_of: list[int]) -> Pair | None:
    """A ``pool`` pair of ``q`` that is inside a block, or on a cycle of
    ``pool`` edges once blocks are contracted."""
    for p, _ in pool.pairs():
        if block_of[p[0]] == block_of[p[1]]:
            return p
    nb = max(block_of) + 1 if block_of else 0
    between: dict[Pair, list[Pair]] = {}
    for p, k in pool.pairs():
        between.setdefault(pair(block_of[p[0]], block_of[p[1]]), []).extend([p] * k)
    bg = Multigraph._raw(nb, {bp: len(l) for bp, l in between.items()})
    br = bridges(bg)
    for bp, _ in bg.pairs():
        if bp not in br:
            return between[bp][0]
    return None


def find_removable_edge(g: Multigraph, h: Multigraph, tree: FragmentTree, node: Node) -> Pair:
    """A pair inside ``node`` with more copies in ``g`` than ``h`` whose
    single-copy removal keeps every fragment of ``g`` connected.

    Requires ``node`` to have fewer crossing edges in ``g`` than in ``h``.
    """
    if not _crossing(g, node) < _crossing(h, node):
        raise PreconditionViolated(
            f"fragment {sorted(node)} does not cross fewer edges in G than in H")
    for c in tree.subtree(node):
        if tree.is_leaf(c):
            continue
        vg = contract(g, tree, c)
        vh = contract(h, tree, c)
        if vg.qgraph.num_edges <= vh.qgraph.num_edges:
            continue
        common = intersect(vg.qgraph, vh.qgraph)
        comp_of = [0] * vg.qgraph.n
        for i, comp in enumerate(components(common)):
            for x in comp:
                comp_of[x] = i
        qp = _cycle_edge(vg.qgraph, minus(vg.qgraph, vh.qgraph), comp_of)
        if qp is None:
            continue
        for p in sorted(set(vg.provenance[qp])):
            if g.m(*p) > h.m(*p):
                return p
    raise PreconditionViolated(f"no removable edge found inside {sorted(node)}")


def removable_edge_inside(g: Multigraph, tree: FragmentTree, node: Node) -> Pair | None:
    """A pair inside ``node`` whose single-copy removal keeps every fragment
    of ``g`` below ``node`` connected, or None when ``g[node]`` is minimally
    connected."""
    for c in tree.subtree(node):
        if tree.is_leaf(c):
            continue
        v = contract(g, tree, c)
        q = v.qgraph
        p = _cycle_edge(q, q, list(range(q.n)))
        if p is not None:
            return v.provenance[p][0]
    return None

"""Transforming between two members of a nested-constraint family.

The two graphs are made to agree on a growing well-structured subtree of the
fragment tree. Each stage expands one leaf fragment ``C`` into its children
(the special blocks): first the quotient degrees of the special blocks are
equalized, touching either side; then the ``G`` side is aligned with the
``H`` side by special flips computed on an auxiliary connected graph.

Flips applied to the ``H`` side are inverted and replayed in reverse at the
end so the result is a single sequence from ``G`` to ``H`` of length at
most ``(2d + 1) δ(G, H)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .connected import improve_step
from .errors import DegreeMismatch, NotMember, PreconditionViolated
from .fragments import (
    ContractedView, FragmentTree, NestedCollection, Node, WellStructuredSubtree,
    build_fragment_tree, check_membership, extend, find_removable_edge, inherited,
    is_special_flip, lift_flip, root_subtree,
)
from .multigraph import Flip, FlipSequence, Multigraph, apply_flip, delta, pair


@dataclass
class StagePlan:
    t1: WellStructuredSubtree
    t2: WellStructuredSubtree
    node: Node
    special: frozenset
    g_flips: FlipSequence = field(default_factory=FlipSequence)
    h_flips: FlipSequence = field(default_factory=FlipSequence)
    align_flips: FlipSequence = field(default_factory=FlipSequence)
    quotient_delta: int = 0


@dataclass
class NestedPlan:
    sequence: FlipSequence
    stages: list[StagePlan]
    delta: int
    height: int

    @property
    def bound(self) -> int:
        return (2 * self.height + 1) * self.delta


def _special_indices(view: ContractedView, special) -> list[int]:
    return [i for i, b in enumerate(view.blocks) if b in special]


# -- degree equalization -------------------------------------------------------

def _surplus_base_edge(view: ContractedView, a: Multigraph, b: Multigraph,
                       y: int, z: int) -> tuple[int, int]:
    """A base edge between blocks ``y`` and ``z`` with more copies in ``a``
    than in ``b``, oriented from ``y``."""
    for p in sorted(set(view.provenance.get(pair(y, z), ()))):
        if a.m(*p) > b.m(*p):
            return p if view.block_of[p[0]] == y else p[::-1]
    raise PreconditionViolated(f"no surplus base edge between blocks {y} and {z}")


def _equalizing_flip(a: Multigraph, b: Multigraph, va: ContractedView, vb: ContractedView,
                     x: int, xs: set[int], tree: FragmentTree) -> Flip:
    """A correct flip of ``a`` raising the quotient degree of block ``x``
    by two; ``x`` has lower degree in ``va`` than in ``vb``."""
    qa, qb = va.qgraph, vb.qgraph
    da, db = qa.degrees(), qb.degrees()
    ys = [y for y in range(qa.n) if y != x and qb.m(x, y) > qa.m(x, y)]
    if not ys:
        raise PreconditionViolated("degree gap without a missing quotient edge")
    xblock = va.blocks[x]
    for y in ys:
        if da[y] < db[y]:
            e1 = find_removable_edge(a, b, tree, xblock)
            e2 = find_removable_edge(a, b, tree, va.blocks[y])
            return Flip(e1[0], e1[1], e2[0], e2[1])
    y = ys[0]
    e1 = find_removable_edge(a, b, tree, xblock)
    for z in range(qa.n):
        if z in (x, y) or qa.m(y, z) <= qb.m(y, z):
            continue
        if y not in xs and z not in xs:
            continue
        yb, zb = _surplus_base_edge(va, a, b, y, z)
        return Flip(e1[0], e1[1], yb, zb)
    raise PreconditionViolated("no edge to reroute for degree equalization")


def equalize_degrees(g: Multigraph, h: Multigraph, tree: FragmentTree,
                     t2: WellStructuredSubtree, special) -> tuple[FlipSequence, FlipSequence]:
    """Flips for each side after which ``G⇓T2`` and ``H⇓T2`` share a
    degree vector. The side with the smaller quotient degree at a
    mismatched special block (so with a surplus edge inside it) is modified."""
    gs, hs = FlipSequence(), FlipSequence()
    while True:
        vg, vh = inherited(g, t2), inherited(h, t2)
        dg, dh = vg.qgraph.degrees(), vh.qgraph.degrees()
        mismatched = [i for i in range(len(dg)) if dg[i] != dh[i]]
        if not mismatched:
            return gs, hs
        xs = set(_special_indices(vg, special))
        x = mismatched[0]
        if x not in xs:
            raise PreconditionViolated("graphs do not agree on the parent subtree")
        before = delta(vg.qgraph, vh.qgraph)
        if dg[x] < dh[x]:
            f = _equalizing_flip(g, h, vg, vh, x, xs, tree)
            g = apply_flip(g, f)
            gs.append(f)
        else:
            f = _equalizing_flip(h, g, vh, vg, x, xs, tree)
            h = apply_flip(h, f)
            hs.append(f)
        after = delta(inherited(g, t2).qgraph, inherited(h, t2).qgraph)
        if after > before:
            raise AssertionError("degree equalization increased the quotient difference")


# -- alignment by special flips ------------------------------------------------

def auxiliary_graphs(va: ContractedView, vb: ContractedView, xs: list[int]):
    """Special blocks plus one pendant vertex per edge leaving them.

    Pendants of an outside block attach first to the special blocks both
    sides share, so a pendant edge differs between the two graphs exactly
    when the quotient multiplicities differ. Returns both auxiliary graphs
    and the map from auxiliary vertices to block indices.
    """
    xs = sorted(xs)
    xset = set(xs)
    index = {blk: i for i, blk in enumerate(xs)}
    labels = list(xs)
    ea: Counter = Counter()
    eb: Counter = Counter()
    for q, e in ((va.qgraph, ea), (vb.qgraph, eb)):
        for (u, v), k in q.pairs():
            if u in xset and v in xset:
                e[(index[u], index[v])] += k
    for w in range(va.qgraph.n):
        if w in xset:
            continue
        na = Counter({x: va.qgraph.m(w, x) for x in xs if va.qgraph.m(w, x)})
        nb = Counter({x: vb.qgraph.m(w, x) for x in xs if vb.qgraph.m(w, x)})
        common = sorted((na & nb).elements())
        rest_a = sorted((na - nb).elements())
        rest_b = sorted((nb - na).elements())
        if len(rest_a) != len(rest_b):
            raise PreconditionViolated("sides disagree on edges leaving the special blocks")
        for xa, xb in [(x, x) for x in common] + list(zip(rest_a, rest_b)):
            p = len(labels)
            labels.append(w)
            ea[(index[xa], p)] += 1
            eb[(index[xb], p)] += 1
    n = len(labels)
    return Multigraph(n, dict(ea)), Multigraph(n, dict(eb)), labels


def align_on_extension(g: Multigraph, h: Multigraph, tree: FragmentTree,
                       t2: WellStructuredSubtree, special) -> FlipSequence:
    """Special flips of ``g`` (only surplus edges) making ``G⇓T2`` equal ``H⇓T2``."""
    seq = FlipSequence()
    vh = inherited(h, t2)
    while True:
        vg = inherited(g, t2)
        if vg.qgraph == vh.qgraph:
            return seq
        xs = _special_indices(vg, special)
        if vg.qgraph.degrees() != vh.qgraph.degrees():
            raise PreconditionViolated("quotient degree vectors differ; equalize first")
        aux_g, aux_h, labels = auxiliary_graphs(vg, vh, xs)
        step = improve_step(aux_g, aux_h)
        just_created: tuple = ()
        for fa in step:
            qf = fa.relabel(labels)
            if not is_special_flip(vg, xs, qf):
                raise AssertionError(f"auxiliary flip {fa} is not special")
            bf = lift_flip(vg, qf, prefer_bad=(g, h), prefer=just_created)
            g = apply_flip(g, bf)
            seq.append(bf)
            just_created = bf.created
            vg = inherited(g, t2)


# -- assembly ------------------------------------------------------------------------

def _tree(cc) -> FragmentTree:
    return cc if isinstance(cc, FragmentTree) else build_fragment_tree(cc)


def plan_nested(g: Multigraph, h: Multigraph, s, cc: NestedCollection | FragmentTree) -> NestedPlan:
    tree = _tree(cc)
    s = tuple(s)
    if g.degrees() != s or h.degrees() != s:
        raise DegreeMismatch("graphs must realize the given degree vector")
    if not check_membership(g, s, tree) or not check_membership(h, s, tree):
        raise NotMember("both graphs must keep every fragment connected")
    d0 = delta(g, h)
    gseq, hseq = FlipSequence(), FlipSequence()
    stages = []
    t = root_subtree(tree)
    order = sorted(tree.internal_nodes, key=lambda c: (tree.depth[c], min(c)))
    for node in order:
        t2, special = extend(t, node)
        stage = StagePlan(t, t2, node, special)
        stage.quotient_delta = delta(inherited(g, t2).qgraph, inherited(h, t2).qgraph)
        gf, hf = equalize_degrees(g, h, tree, t2, special)
        g = gf.apply(g)
        h = hf.apply(h)
        af = align_on_extension(g, h, tree, t2, special)
        g = af.apply(g)
        stage.g_flips, stage.h_flips, stage.align_flips = gf, hf, af
        gseq.extend(gf)
        gseq.extend(af)
        hseq.extend(hf)
        stages.append(stage)
        t = t2
    if g != h:
        raise AssertionError("sides differ after the last stage")
    gseq.extend(hseq.inverted())
    return NestedPlan(gseq, stages, d0, tree.height)


def transform_nested(g: Multigraph, h: Multigraph, s, cc: NestedCollection | FragmentTree) -> FlipSequence:
    """Correct flips from ``g`` to ``h``; every intermediate graph keeps
    every fragment connected."""
    return plan_nested(g, h, s, cc).sequence

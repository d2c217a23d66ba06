"""Suffix-link trie, the one-sided graph G+ and the weighted product graph G_{K,Q}.

A vertex of the product graph is a state ``(p, a0, u)``: ``p`` is the leaf
spelled by the past read backwards, ``a0`` the current digit and ``u`` the
part of the future read so far.  Prolongation edges extend ``u``; once ``u``
is a leaf ``s`` a shift edge moves the origin one step right and carries the
weight ``a0 + mid(p) + mid(s)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .contfrac import Word, make_context
from .cylinders import CylinderSet, build_cylinders
from .exact import Surd

PROLONGATION = "prolongation"
SHIFT = "shift"
GRAPH_MAGIC = "lagspec-graph 1"


class InsufficientContext(ValueError):
    """The digit window is too short to pin down the requested path."""


@dataclass(eq=False)
class SuffixTrie:
    cs: CylinderSet
    suffix_link: list[int]  # per leaf index: node id of the leaf minus its first digit
    vplus: list[int]  # sorted node ids

    @property
    def vplus_set(self) -> frozenset[int]:
        return frozenset(self.vplus)


def build_trie(cs: CylinderSet) -> SuffixTrie:
    links = []
    for leaf in cs.leaves:
        suffix = leaf[1:]
        node = cs.index.get(suffix)
        if node is None:
            raise AssertionError(f"suffix {suffix} of {leaf} is missing from the tree")
        links.append(node)
    return SuffixTrie(cs, links, sorted(set(links)))


@dataclass(frozen=True)
class GEdge:
    source: int
    target: int
    kind: str
    label: Word
    leaf: int | None = None  # leaf index consumed by a shift edge


@dataclass(eq=False)
class GPlus:
    trie: SuffixTrie
    vertices: list[int]  # trie node ids
    edges: list[GEdge]

    def out_edges(self, node: int) -> list[GEdge]:
        return [e for e in self.edges if e.source == node]


def build_gplus(t: SuffixTrie) -> GPlus:
    """Compress tree paths between V+ vertices; shift edges end in suffix-link targets.

    The root is always kept as a vertex (a pure source when it is not itself a
    suffix-link target) so that every leaf has an ancestor to hang its shift edge on.
    """
    cs = t.cs
    kept = set(t.vplus) | {0}
    vertices = sorted(kept)
    edges: list[GEdge] = []
    for w in vertices:
        if cs.children[w] is None:
            li = cs.leaf_of_node[w]
            edges.append(GEdge(w, t.suffix_link[li], SHIFT, (), li))
            continue
        depth = len(cs.nodes[w])
        stack = list(reversed(cs.children[w]))
        while stack:
            node = stack.pop()
            label = cs.nodes[node][depth:]
            if node in kept:
                edges.append(GEdge(w, node, PROLONGATION, label))
            elif cs.children[node] is None:
                li = cs.leaf_of_node[node]
                edges.append(GEdge(w, t.suffix_link[li], SHIFT, label, li))
            else:
                stack.extend(reversed(cs.children[node]))
    return GPlus(t, vertices, edges)


@dataclass(eq=False)
class ProductGraph:
    """Edge-list graph; ``weights[i]`` is ``None`` for prolongation edges.

    ``triples[i]`` is ``(p, a0, s)`` as (leaf index, digit, leaf index) for shift
    edges.  ``labels[i]`` is the future word read along the edge.
    """

    cs: CylinderSet
    compressed: bool
    states: list[int]  # trie node id per local state slot
    src: list[int] = field(default_factory=list)
    dst: list[int] = field(default_factory=list)
    weights: list[Surd | None] = field(default_factory=list)
    triples: list[tuple[int, int, int] | None] = field(default_factory=list)
    labels: list[Word] = field(default_factory=list)

    @property
    def ctx(self):
        return self.cs.ctx

    @property
    def q(self) -> int:
        return self.cs.q

    @property
    def n_vertices(self) -> int:
        return len(self.cs) * self.cs.k * len(self.states)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def n_shift(self) -> int:
        return sum(1 for t in self.triples if t is not None)

    def vertex_id(self, leaf: int, a0: int, node: int) -> int:
        slot = self._slot[node]
        return (leaf * self.cs.k + a0 - 1) * len(self.states) + slot

    def vertex(self, vid: int) -> tuple[Word, int, Word]:
        block, slot = divmod(vid, len(self.states))
        leaf, a = divmod(block, self.cs.k)
        return self.cs.leaves[leaf], a + 1, self.cs.nodes[self.states[slot]]

    def has_state(self, node: int) -> bool:
        return node in self._slot

    def __post_init__(self):
        self._slot = {node: i for i, node in enumerate(self.states)}
        self._out: list[list[int]] | None = None

    def out_edges(self, vid: int) -> list[int]:
        if self._out is None:
            out: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for i, s in enumerate(self.src):
                out[s].append(i)
            self._out = out
        return self._out[vid]

    def shift_edges(self) -> Iterator[int]:
        return (i for i, t in enumerate(self.triples) if t is not None)

    def _add(self, s, d, w, triple, label):
        self.src.append(s)
        self.dst.append(d)
        self.weights.append(w)
        self.triples.append(triple)
        self.labels.append(label)


def shift_weight(cs: CylinderSet, p: int, a0: int, s: int) -> Surd:
    mids = cs.mids
    return mids[p] + mids[s] + a0


def build_product(cs: CylinderSet, compress: bool = False) -> ProductGraph:
    """Product graph at trie-node granularity, or contracted onto G+ vertices."""
    t = build_trie(cs)
    k = cs.k
    leaves = cs.leaves
    if compress:
        gp = build_gplus(t)
        g = ProductGraph(cs, True, gp.vertices)
        plan = gp.edges
    else:
        g = ProductGraph(cs, False, list(range(len(cs.nodes))))
        plan = []
        for node, kids in enumerate(cs.children):
            if kids is None:
                li = cs.leaf_of_node[node]
                plan.append(GEdge(node, t.suffix_link[li], SHIFT, (), li))
            else:
                for x, child in enumerate(kids, start=1):
                    plan.append(GEdge(node, child, PROLONGATION, (x,)))
    for pi, p in enumerate(leaves):
        for a0 in range(1, k + 1):
            p_next = cs.leaf_index((a0,) + p)
            for e in plan:
                src = g.vertex_id(pi, a0, e.source)
                if e.kind == PROLONGATION:
                    g._add(src, g.vertex_id(pi, a0, e.target), None, None, e.label)
                else:
                    s = leaves[e.leaf]
                    dst = g.vertex_id(p_next, s[0], e.target)
                    w = shift_weight(cs, pi, a0, e.leaf)
                    g._add(src, dst, w, (pi, a0, e.leaf), e.label)
    return g


def edge_count_bound(cs: CylinderSet) -> float:
    """|C| (|C| + log2((K(K+1)+1)(K+2) Q / K)), the published bound on |E(G_{K,Q})|."""
    from math import log2

    k, n = cs.k, len(cs)
    return n * (n + log2((k * (k + 1) + 1) * (k + 2) * cs.q / k))


# -- walks --------------------------------------------------------------------


def encode_walk(g: ProductGraph, window: Sequence[int], origin: int) -> list[int]:
    """Edge ids of the unique path reading ``window`` from position ``origin`` on.

    The past ``window[:origin]`` must determine the starting leaf and the future
    must determine at least the first shift edge; the walk stops as soon as the
    remaining digits no longer determine the next edge.
    """
    cs = g.cs
    window = cs.ctx.check_word(window)
    if not 0 <= origin < len(window):
        raise ValueError("origin outside the window")
    past = window[:origin][::-1]
    try:
        p = cs.leaf_index(past)
    except ValueError:
        raise InsufficientContext(f"{origin} digits of past do not reach a leaf") from None
    vid = g.vertex_id(p, window[origin], 0)
    pos, depth = origin, 0  # future read so far is window[pos+1 : pos+1+depth]
    path: list[int] = []
    while True:
        start = pos + 1 + depth
        chosen = None
        for e in g.out_edges(vid):
            lab = g.labels[e]
            if start + len(lab) <= len(window) and tuple(window[start : start + len(lab)]) == lab:
                chosen = e
                break
        if chosen is None:
            if not any(g.triples[e] is not None for e in path):
                raise InsufficientContext("window too short to reach a shift edge")
            return path
        path.append(chosen)
        vid = g.dst[chosen]
        if g.triples[chosen] is None:
            depth += len(g.labels[chosen])
        else:
            pos += 1
            depth = len(g.vertex(vid)[2])


def read_walk(g: ProductGraph, path: Sequence[int]) -> list[int]:
    """Digits at the origins visited by the shift edges of ``path``."""
    out = []
    for e in path:
        t = g.triples[e]
        if t is not None:
            out.append(t[1])
    return out


def is_path(g: ProductGraph, path: Sequence[int]) -> bool:
    return all(g.dst[a] == g.src[b] for a, b in zip(path, path[1:]))


# -- cache --------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def dump_graph(g: ProductGraph) -> str:
    lines = [
        GRAPH_MAGIC,
        f"{g.cs.k} {g.q} {int(g.compressed)} {g.n_vertices} {g.n_edges}",
        " ".join(map(str, g.states)),
    ]
    lines.extend("".join(map(str, w)) for w in g.cs.leaves)
    lines.append("edges")
    for i in range(g.n_edges):
        lab = "".join(map(str, g.labels[i])) or "-"
        w = g.weights[i]
        if w is None:
            lines.append(f"P {g.src[i]} {g.dst[i]} {lab}")
        else:
            p, a0, s = g.triples[i]
            lines.append(
                f"S {g.src[i]} {g.dst[i]} {lab} {p} {a0} {s} {_frac(w.a)} {_frac(w.b)} {w.d}"
            )
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> ProductGraph:
    from .cylinders import from_leaves

    lines = text.splitlines()
    if not lines or lines[0] != GRAPH_MAGIC:
        raise ValueError("not a graph cache file (bad header)")
    k, q, compressed, n_vertices, n_edges = map(int, lines[1].split())
    states = [int(x) for x in lines[2].split()]
    sep = lines.index("edges")
    leaves = [tuple(int(ch) for ch in line) for line in lines[3:sep]]
    cs = from_leaves(make_context(k), q, leaves)
    g = ProductGraph(cs, bool(compressed), states)
    for line in lines[sep + 1 :]:
        parts = line.split()
        lab = () if parts[3] == "-" else tuple(int(ch) for ch in parts[3])
        if parts[0] == "P":
            g._add(int(parts[1]), int(parts[2]), None, None, lab)
        else:
            p, a0, s = map(int, parts[4:7])
            w = Surd._raw(Fraction(parts[7]), Fraction(parts[8]), int(parts[9]))
            g._add(int(parts[1]), int(parts[2]), w, (p, a0, s), lab)
    if g.n_vertices != n_vertices or g.n_edges != n_edges:
        raise ValueError("graph cache is truncated or inconsistent")
    return g


def product_for(k: int, q: int, compress: bool = False) -> ProductGraph:
    return build_product(build_cylinders(make_context(k), q), compress=compress)

"""Lagrange and Markov edges of weighted digraphs and the resulting spectra.

An edge is *Lagrange* when some cycle through it has no heavier edge, and
*Markov* when it lies on a cycle-path-cycle configuration with no heavier edge.
Ties count as maximal.  Weights may be any totally ordered values; ``BOTTOM``
sits strictly below all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .contfrac import KContext, Word
from .cylinders import CylinderSet
from .exact import Surd

LAGRANGE = "lagrange"
MARKOV = "markov"
KINDS = (LAGRANGE, MARKOV)


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


def _key(w):
    return (0, 0) if w is BOTTOM else (1, w)


@dataclass(eq=False)
class WeightedDigraph:
    n_vertices: int
    src: list[int]
    dst: list[int]
    weights: list[Any]

    def __post_init__(self):
        if not len(self.src) == len(self.dst) == len(self.weights):
            raise ValueError("src, dst and weights must have equal length")
        for s, d in zip(self.src, self.dst):
            if not (0 <= s < self.n_vertices and 0 <= d < self.n_vertices):
                raise ValueError(f"edge {s}->{d} out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, Any]]) -> WeightedDigraph:
        src, dst, w = [], [], []
        for s, d, x in edges:
            src.append(s)
            dst.append(d)
            w.append(x)
        return cls(n, src, dst, w)

    @classmethod
    def from_product(cls, g) -> WeightedDigraph:
        weights = [BOTTOM if w is None else w for w in g.weights]
        return cls(g.n_vertices, list(g.src), list(g.dst), weights)

    @property
    def n_edges(self) -> int:
        return len(self.src)


def _ranks(weights: Sequence[Any]) -> list[int]:
    """Dense ranks: equal weights share a rank, BOTTOM gets the lowest."""
    order = sorted(range(len(weights)), key=lambda i: _key(weights[i]))
    ranks = [0] * len(weights)
    r = -1
    prev = None
    for n, i in enumerate(order):
        if n == 0 or weights[i] != prev:
            r += 1
            prev = weights[i]
        ranks[i] = r
    return ranks


# -- per-edge tests -----------------------------------------------------------


class _Adjacency:
    def __init__(self, g: WeightedDigraph):
        self.g = g
        self.rank = _ranks(g.weights)
        self.out: list[list[int]] = [[] for _ in range(g.n_vertices)]
        self.inn: list[list[int]] = [[] for _ in range(g.n_vertices)]
        for i, (s, d) in enumerate(zip(g.src, g.dst)):
            self.out[s].append(i)
            self.inn[d].append(i)

    def reaches(self, start: int, goal: int, cap: int) -> bool:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            if x == goal:
                return True
            for e in self.out[x]:
                if self.rank[e] <= cap:
                    y = self.g.dst[e]
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return False

    def sees_cycle(self, start: int, cap: int, backward: bool) -> bool:
        """Whether a cycle of edges with rank <= cap is reachable from ``start``."""
        adj = self.inn if backward else self.out
        ends = self.g.src if backward else self.g.dst
        rank = self.rank
        state = {start: 1}  # 1 = on the DFS stack, 2 = finished
        stack = [(start, iter(adj[start]))]
        while stack:
            x, it = stack[-1]
            for e in it:
                if rank[e] > cap:
                    continue
                y = ends[e]
                s = state.get(y)
                if s == 1:
                    return True
                if s is None:
                    state[y] = 1
                    stack.append((y, iter(adj[y])))
                    break
            else:
                state[x] = 2
                stack.pop()
        return False


def is_lagrange_edge(g: WeightedDigraph, e: int, _adj: _Adjacency | None = None) -> bool:
    """One depth-first search from the target back to the source over edges <= w(e)."""
    adj = _adj or _Adjacency(g)
    return adj.reaches(g.dst[e], g.src[e], adj.rank[e])


def is_markov_edge(g: WeightedDigraph, e: int, _adj: _Adjacency | None = None) -> bool:
    """A cycle ahead of the target and one behind the source, all edges <= w(e)."""
    adj = _adj or _Adjacency(g)
    cap = adj.rank[e]
    return adj.sees_cycle(g.dst[e], cap, backward=False) and adj.sees_cycle(
        g.src[e], cap, backward=True
    )


def naive_weight_sets(g: WeightedDigraph) -> tuple[list, list]:
    """Apply both per-edge tests to every edge; O(m) per edge."""
    adj = _Adjacency(g)
    lag: set = set()
    mar: set = set()
    for e, w in enumerate(g.weights):
        if w in lag:
            continue
        if is_lagrange_edge(g, e, adj):
            lag.add(w)
            mar.add(w)
        elif w not in mar and is_markov_edge(g, e, adj):
            mar.add(w)
    return sorted(lag, key=_key), sorted(mar, key=_key)


# -- incremental --------------------------------------------------------------


@dataclass
class WeightSets:
    lagrange: list
    markov: list
    lagrange_witness: dict = field(default_factory=dict)
    markov_witness: dict = field(default_factory=dict)


def insertion_order(weights: Sequence[Any], reverse_ties: bool = False) -> list[int]:
    order = sorted(range(len(weights)), key=lambda i: _key(weights[i]))
    if reverse_ties:
        out: list[int] = []
        run: list[int] = []
        for i in order:
            if run and weights[i] != weights[run[0]]:
                out.extend(reversed(run))
                run = []
            run.append(i)
        out.extend(reversed(run))
        order = out
    return order


class IncrementalCondensation:
    """Strongly connected components under edge insertion.

    Components live in a union-find; the condensation keeps a topological order
    that is repaired locally on each insertion (Pearce-Kelly).  An insertion that
    would violate the order triggers two bounded searches which either find the
    new cycle (whose components get merged) or yield the reordering.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.ord = list(range(n))
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.inn: list[list[int]] = [[] for _ in range(n)]
        self.nontrivial = [False] * n
        # reaches a nontrivial component forward / is reached from one
        self.fwd = [False] * n
        self.bwd = [False] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def insert(self, s: int, t: int) -> bool:
        """Add edge s->t; return True when it closes a cycle."""
        u, v = self.find(s), self.find(t)
        if u == v:
            self._mark_nontrivial(u)
            return True
        self.out[u].append(v)
        self.inn[v].append(u)
        if self.ord[u] > self.ord[v]:
            merged = self._repair(u, v)
            if merged is not None:
                self._mark_nontrivial(merged)
                return True
        if self.fwd[v] and not self.fwd[u]:
            self._spread(u, self.fwd, self.inn)
        if self.bwd[u] and not self.bwd[v]:
            self._spread(v, self.bwd, self.out)
        return False

    def _spread(self, start: int, flag: list[bool], adj: list[list[int]]) -> None:
        flag[start] = True
        stack = [start]
        find = self.find
        while stack:
            x = stack.pop()
            for y in adj[x]:
                y = find(y)
                if not flag[y]:
                    flag[y] = True
                    stack.append(y)

    def _mark_nontrivial(self, c: int) -> None:
        self.nontrivial[c] = True
        if not self.fwd[c]:
            self._spread(c, self.fwd, self.inn)
        if not self.bwd[c]:
            self._spread(c, self.bwd, self.out)

    def _search(self, start: int, adj, keep) -> list[int]:
        find = self.find
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                y = find(y)
                if y not in seen and keep(y):
                    seen.add(y)
                    stack.append(y)
        return list(seen)

    def _repair(self, u: int, v: int) -> int | None:
        ord_ = self.ord
        lb, ub = ord_[v], ord_[u]
        fwd = self._search(v, self.out, lambda y: ord_[y] <= ub)
        bwd = self._search(u, self.inn, lambda y: ord_[y] >= lb)
        fwd_set = set(fwd)
        if u not in fwd_set:
            seq = sorted(bwd, key=ord_.__getitem__) + sorted(fwd, key=ord_.__getitem__)
            pool = sorted(ord_[x] for x in seq)
            for x, pos in zip(seq, pool):
                ord_[x] = pos
            return None
        cycle = [x for x in bwd if x in fwd_set]
        cycle_set = set(cycle)
        before = sorted((x for x in bwd if x not in cycle_set), key=ord_.__getitem__)
        after = sorted((x for x in fwd if x not in cycle_set), key=ord_.__getitem__)
        pool = sorted(ord_[x] for x in set(fwd) | set(bwd))
        rep = self._merge(cycle)
        for x, pos in zip(before, pool):
            ord_[x] = pos
        ord_[rep] = pool[len(before)]
        for x, pos in zip(after, pool[len(pool) - len(after) :]):
            ord_[x] = pos
        return rep

    def _merge(self, members: list[int]) -> int:
        rep = max(members, key=lambda x: len(self.out[x]) + len(self.inn[x]))
        for x in members:
            if x == rep:
                continue
            self.parent[x] = rep
            self.out[rep].extend(self.out[x])
            self.inn[rep].extend(self.inn[x])
            self.out[x] = []
            self.inn[x] = []
        # drop edges that became internal, and duplicates
        find = self.find
        self.out[rep] = list({y for y in map(find, self.out[rep]) if y != rep})
        self.inn[rep] = list({y for y in map(find, self.inn[rep]) if y != rep})
        return rep


def incremental_weight_sets(
    g: WeightedDigraph, reverse_ties: bool = False, witnesses: bool = False
):
    """Insert edges by nondecreasing weight while maintaining the condensation.

    A weight is Lagrange when its edge closes a cycle on insertion, and Markov when,
    right after insertion, its target reaches a nontrivial component and its source
    is reached from one.
    """
    cond = IncrementalCondensation(g.n_vertices)
    lag: dict = {}
    mar: dict = {}
    for e in insertion_order(g.weights, reverse_ties):
        w = g.weights[e]
        s, t = g.src[e], g.dst[e]
        if cond.insert(s, t):
            lag.setdefault(w, e)
            mar.setdefault(w, e)
        elif w not in mar and cond.fwd[cond.find(t)] and cond.bwd[cond.find(s)]:
            mar[w] = e
    result = WeightSets(sorted(lag, key=_key), sorted(mar, key=_key), lag, mar)
    if witnesses:
        return result
    return result.lagrange, result.markov


def _tarjan(nodes: list[int], adj: dict[int, list[int]]) -> dict[int, int]:
    """Iterative Tarjan; maps each node to an SCC label."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    comp: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp[x] = v
                    if x == v:
                        break
    return comp


def cycle_times(n: int, src: Sequence[int], dst: Sequence[int], cls: Sequence[int], n_classes: int) -> list[int]:
    """For each edge, the first class T >= its own at which it lies on a cycle of G_{<=T}.

    ``n_classes`` means never.  Offline divide and conquer over classes: at the
    midpoint one SCC pass splits the edges into those already inside a
    component and the rest, and components found on the left are contracted in
    a union-find before the right half is processed.
    """
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    ans = [n_classes] * len(src)
    # explicit stack of (lo, hi, edges); right halves wait until left halves are done
    todo = [(0, n_classes, list(range(len(src))))]
    while todo:
        lo, hi, edges = todo.pop()
        if not edges:
            continue
        if lo == hi:
            if lo < n_classes:
                for e in edges:
                    ans[e] = lo
                    a, b = find(src[e]), find(dst[e])
                    if a != b:
                        parent[a] = b
            continue
        mid = (lo + hi) // 2
        adj: dict[int, list[int]] = {}
        nodes = []
        for e in edges:
            if cls[e] <= mid:
                a, b = find(src[e]), find(dst[e])
                if a != b:
                    adj.setdefault(a, []).append(b)
                    nodes.append(a)
        comp = _tarjan(nodes, adj)
        left, right = [], []
        for e in edges:
            if cls[e] <= mid:
                a, b = find(src[e]), find(dst[e])
                if a == b or comp.get(a, a) == comp.get(b, b):
                    left.append(e)
                    continue
            right.append(e)
        todo.append((mid + 1, hi, right))
        todo.append((lo, mid, left))
    return ans


def _minimax(n: int, seeds: list[int], edges: list[tuple[int, int, int]], never: int) -> list[int]:
    """``best[v]`` = min over walks v -> ... -> x of max(classes on the walk, seeds[x])."""
    import heapq

    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, c in edges:
        adj[v].append((u, c))
    best = list(seeds)
    heap = [(b, v) for v, b in enumerate(best) if b < never]
    heapq.heapify(heap)
    while heap:
        b, v = heapq.heappop(heap)
        if b > best[v]:
            continue
        for u, c in adj[v]:
            nb = b if b > c else c
            if nb < best[u]:
                best[u] = nb
                heapq.heappush(heap, (nb, u))
    return best


def offline_weight_sets(g: WeightedDigraph, witnesses: bool = False):
    """Same output as ``incremental_weight_sets``, computed offline.

    Weight class w is Lagrange when one of its edges lies on a cycle of G_{<=w}.
    It is Markov when one of its edges has its target reaching, and its source
    reached from, a vertex that lies on a cycle of G_{<=w}.
    """
    n, m = g.n_vertices, g.n_edges
    cls = _ranks(g.weights)
    n_classes = max(cls, default=-1) + 1
    cyc = cycle_times(n, g.src, g.dst, cls, n_classes)
    on_cycle = [n_classes] * n
    for e in range(m):
        s = g.src[e]
        if cyc[e] < on_cycle[s]:
            on_cycle[s] = cyc[e]
    triples = [(g.src[e], g.dst[e], cls[e]) for e in range(m)]
    reaches = _minimax(n, on_cycle, triples, n_classes)
    reached = _minimax(n, on_cycle, [(v, u, c) for u, v, c in triples], n_classes)
    lag: dict = {}
    mar: dict = {}
    for e in range(m):
        c, w = cls[e], g.weights[e]
        if cyc[e] == c:
            lag.setdefault(w, e)
        if reaches[g.dst[e]] <= c and reached[g.src[e]] <= c:
            mar.setdefault(w, e)
    result = WeightSets(sorted(lag, key=_key), sorted(mar, key=_key), lag, mar)
    if witnesses:
        return result
    return result.lagrange, result.markov


# -- spectra of G_{K,Q} ---------------------------------------------------------


@dataclass(frozen=True)
class SpectrumApproximation:
    """Sorted distinct weights, each 1/Q-close to the true spectrum and vice versa."""

    kind: str
    ctx: KContext
    q: int
    weights: tuple[Surd, ...]
    provenance: tuple[tuple[Word, int, Word], ...]

    def __len__(self):
        return len(self.weights)

    @property
    def radius(self) -> Fraction:
        return Fraction(1, self.q)


def spectrum(cs: CylinderSet, kind: str, graph=None) -> SpectrumApproximation:
    return spectra_pair(cs, graph)[kind]


def spectra_pair(cs: CylinderSet, graph=None) -> dict[str, SpectrumApproximation]:
    """Both spectra of G_{K,Q} from one offline pass."""
    from .graphs import build_product

    if graph is None:
        graph = build_product(cs, compress=True)
    wg = WeightedDigraph.from_product(graph)
    res = offline_weight_sets(wg, witnesses=True)
    out = {}
    leaves = cs.leaves
    for kind, ws, wit in (
        (LAGRANGE, res.lagrange, res.lagrange_witness),
        (MARKOV, res.markov, res.markov_witness),
    ):
        if ws and ws[0] is BOTTOM:
            raise AssertionError("a cycle of prolongation edges: the graph is malformed")
        prov = []
        for w in ws:
            p, a0, s = graph.triples[wit[w]]
            prov.append((leaves[p], a0, leaves[s]))
        out[kind] = SpectrumApproximation(kind, cs.ctx, cs.q, tuple(ws), tuple(prov))
    return out


def hausdorff_distance(xs: Sequence[Surd], ys: Sequence[Surd]) -> Surd:
    """Exact Hausdorff distance between two nonempty sorted lists from one field."""
    from bisect import bisect_left

    def one_way(a, b):
        worst = Surd(0)
        for x in a:
            i = bisect_left(b, x)
            best = None
            for j in (i - 1, i):
                if 0 <= j < len(b):
                    gap = abs(x - b[j])
                    if best is None or gap < best:
                        best = gap
            if best > worst:
                worst = best
        return worst

    if not xs or not ys:
        raise ValueError("Hausdorff distance of an empty set")
    return max(one_way(xs, ys), one_way(ys, xs))

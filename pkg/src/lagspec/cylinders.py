"""The prefix-free cover C_{K,Q} of minimal cylinders of diameter at most 1/Q."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .contfrac import Convergents, KContext, Word, diam, diam_denominator, make_context, mid
from .exact import Surd

CACHE_MAGIC = "lagspec-cylinders 1"


class ResolutionTooSmall(ValueError):
    pass


@dataclass(eq=False)
class CylinderSet:
    """Leaves of C_{K,Q} plus the prefix tree over their prefix-closure.

    Nodes are numbered in depth-first (lexicographic) order; node 0 is the empty
    word.  ``children[i]`` is a tuple of K node ids, or ``None`` for a leaf.
    """

    ctx: KContext
    q: int
    nodes: list[Word]
    children: list[tuple[int, ...] | None]
    leaf_of_node: list[int]
    leaf_nodes: list[int]
    index: dict[Word, int] = field(repr=False)

    @property
    def k(self) -> int:
        return self.ctx.k

    @cached_property
    def leaves(self) -> list[Word]:
        return [self.nodes[i] for i in self.leaf_nodes]

    def __len__(self) -> int:
        return len(self.leaf_nodes)

    @cached_property
    def mids(self) -> list[Surd]:
        return [mid(self.nodes[i], self.ctx) for i in self.leaf_nodes]

    @cached_property
    def diams(self) -> list[Surd]:
        return [diam(self.nodes[i], self.ctx) for i in self.leaf_nodes]

    def walk(self, word: Sequence[int]) -> int:
        """Node id of the unique leaf that is a prefix of ``word``."""
        node = 0
        for i, b in enumerate(word):
            kids = self.children[node]
            if kids is None:
                return node
            if not 1 <= b <= self.k:
                raise ValueError(f"digit {b} outside 1..{self.k}")
            node = kids[b - 1]
        if self.children[node] is None:
            return node
        raise ValueError(f"insufficient digits: {tuple(word)} ends inside the tree")

    def prefix_leaf(self, word: Sequence[int]) -> Word:
        return self.nodes[self.walk(word)]

    def leaf_index(self, word: Sequence[int]) -> int:
        """Position in ``leaves`` of the leaf that is a prefix of ``word``."""
        return self.leaf_of_node[self.walk(word)]


def _is_small(c: Convergents, ctx: KContext, q: int) -> bool:
    # diam <= 1/Q  <=>  Q * (a+ - a-) <= (q_n + a+ q_{n-1})(q_n + a- q_{n-1})
    return ctx.width * q <= diam_denominator(c, ctx)


def _from_tree(ctx, q, nodes, children) -> CylinderSet:
    leaf_nodes = [i for i, kids in enumerate(children) if kids is None]
    leaf_of_node = [-1] * len(nodes)
    for j, i in enumerate(leaf_nodes):
        leaf_of_node[i] = j
    index = {w: i for i, w in enumerate(nodes)}
    return CylinderSet(ctx, q, nodes, children, leaf_of_node, leaf_nodes, index)


def build_cylinders(ctx: KContext, q: int) -> CylinderSet:
    """Depth-first expansion from the empty word until each diameter drops to 1/Q."""
    if q < 1:
        raise ValueError(f"Q must be positive, got {q}")
    root = Convergents(0, 1, 1, 0)
    if _is_small(root, ctx, q):
        raise ResolutionTooSmall(
            f"Q={q} is too small for K={ctx.k}: the whole Cantor set already has "
            f"diameter <= 1/Q; use a larger Q"
        )
    nodes: list[Word] = []
    children: list[list[int] | None] = []

    def new_node(word: Word, leaf: bool) -> int:
        nodes.append(word)
        children.append(None if leaf else [])
        return len(nodes) - 1

    new_node((), False)
    # stack entries: (parent node, word, convergents); pushed in reverse for lexicographic order
    stack = [(0, (b,), _step(root, b)) for b in range(ctx.k, 0, -1)]
    while stack:
        parent, word, c = stack.pop()
        small = _is_small(c, ctx, q)
        node = new_node(word, small)
        children[parent].append(node)
        if not small:
            for b in range(ctx.k, 0, -1):
                stack.append((node, word + (b,), _step(c, b)))
    frozen = [None if kids is None else tuple(kids) for kids in children]
    return _from_tree(ctx, q, nodes, frozen)


def _step(c: Convergents, b: int) -> Convergents:
    return Convergents(b * c.p_n + c.p_prev, b * c.q_n + c.q_prev, c.p_n, c.q_n)


def from_leaves(ctx: KContext, q: int, leaves: Sequence[Word]) -> CylinderSet:
    """Rebuild the tree from a leaf list (e.g. read back from a cache file)."""
    leafset = set(map(tuple, leaves))
    if not leafset:
        raise ValueError("empty leaf set")
    nodes: list[Word] = []
    children: list[list[int] | None] = []
    inner = {w[:i] for w in leafset for i in range(len(w))}

    def visit(word: Word) -> int:
        node = len(nodes)
        nodes.append(word)
        if word in leafset:
            children.append(None)
            return node
        if word not in inner:
            raise ValueError(f"leaf set does not cover the extension {word}")
        kids: list[int] = []
        children.append(kids)
        for b in range(1, ctx.k + 1):
            kids.append(visit(word + (b,)))
        return node

    visit(())
    frozen = [None if kids is None else tuple(kids) for kids in children]
    return _from_tree(ctx, q, nodes, frozen)


def dump_cylinders(cs: CylinderSet) -> str:
    if cs.k > 9:
        raise ValueError("the cache format stores one character per digit (K <= 9)")
    lines = [CACHE_MAGIC, f"{cs.k} {cs.q}"]
    lines.extend("".join(map(str, w)) for w in cs.leaves)
    return "\n".join(lines) + "\n"


def parse_cylinders(text: str) -> CylinderSet:
    lines = text.splitlines()
    if not lines or lines[0] != CACHE_MAGIC:
        raise ValueError("not a cylinder cache file (bad header)")
    k, q = map(int, lines[1].split())
    leaves = [tuple(int(ch) for ch in line) for line in lines[2:] if line]
    return from_leaves(make_context(k), q, leaves)


def cached_cylinders(ctx: KContext, q: int, cache_dir: str | os.PathLike | None) -> CylinderSet:
    """``build_cylinders`` backed by an optional on-disk cache."""
    if cache_dir is None or ctx.k > 9:
        return build_cylinders(ctx, q)
    path = Path(cache_dir) / f"cylinders-K{ctx.k}-Q{q}.txt"
    if path.exists():
        return parse_cylinders(path.read_text())
    cs = build_cylinders(ctx, q)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dump_cylinders(cs))
    tmp.replace(path)
    return cs


def cylinder_count_bounds(ctx: KContext, q: int) -> tuple[float, float] | None:
    """``(c1 Q^hd_lower, c2 Q^hd_upper)`` when the constants are known for K."""
    if ctx.c1 is None:
        return None
    return ctx.c1 * q**ctx.hd_lower, ctx.c2 * q**ctx.hd_upper



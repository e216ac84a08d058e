"""Automorphism groups of edge-colored complete graphs.

The search is the usual individualization-refinement scheme: refine the
vertex partition to a stable one, individualize a vertex of the first
non-singleton cell, refine again, and so on down to a discrete partition.
The first leaf reached is the reference labeling; every other leaf yields a
candidate map, kept if it preserves all colors.  Orbit pruning on the first
path bounds the work to one successful subtree per new orbit.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .coloring import ColoredGraph
from .permgroup import CapExceeded, Permutation, StabilizerChain, closure, jerrum_filter

__all__ = [
    "SearchBudgetExceeded",
    "TooLarge",
    "CapExceeded",
    "OrderedPartition",
    "GeneratorSet",
    "refine_partition",
    "automorphism_generators",
    "sift_generators",
    "witness_key",
    "brute_force_automorphisms",
    "expand_group",
    "default_search_budget",
    "DEFAULT_SEARCH_BUDGET",
    "DEFAULT_BRUTE_CAP",
]

DEFAULT_SEARCH_BUDGET = 1_000_000
DEFAULT_BRUTE_CAP = 10


class SearchBudgetExceeded(RuntimeError):
    pass


class TooLarge(ValueError):
    pass


def default_search_budget() -> int:
    env = os.environ.get("POLYIDENT_SEARCH_BUDGET")
    if env:
        return int(env)
    return DEFAULT_SEARCH_BUDGET


@dataclass(frozen=True)
class OrderedPartition:
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(sorted(c)) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        flat = [x for c in cells for x in c]
        if any(not c for c in cells) or sorted(flat) != list(range(len(flat))):
            raise ValueError("cells must be nonempty, disjoint and cover 0..m-1")

    @classmethod
    def unit(cls, m: int) -> "OrderedPartition":
        return cls((tuple(range(m)),) if m else ())

    @property
    def m(self) -> int:
        return sum(len(c) for c in self.cells)

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)

    def individualize(self, v: int) -> "OrderedPartition":
        return OrderedPartition(_individualize(self.cells, v))

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[Permutation, ...]
    m: int

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _individualize(cells, v):
    out = []
    for c in cells:
        if v in c:
            out.append((v,))
            rest = tuple(x for x in c if x != v)
            if rest:
                out.append(rest)
        else:
            out.append(c)
    return tuple(out)


def _refine(g: ColoredGraph, cells):
    """Split cells until every node's signature is constant on its cell.

    A node's signature is its own color plus the multiset of
    (edge color, cell index) over all other nodes.  Split cells are ordered
    by signature, which depends only on the partition and the colors, so the
    procedure commutes with color-preserving relabelings.  The returned trace
    records every split and is compared between search nodes.
    """
    ec, nc = g.edge_color, g.node_color
    cells = list(cells)
    trace = []
    while True:
        cell_of = {}
        for k, c in enumerate(cells):
            for x in c:
                cell_of[x] = k
        new_cells = []
        split = False
        for k, c in enumerate(cells):
            if len(c) == 1:
                new_cells.append(c)
                continue
            sigs = {}
            for v in c:
                row = ec[v]
                cnt = Counter((row[u], cell_of[u]) for u in cell_of if u != v)
                sigs[v] = (nc[v], tuple(sorted(cnt.items())))
            groups: dict = {}
            for v in c:
                groups.setdefault(sigs[v], []).append(v)
            if len(groups) == 1:
                new_cells.append(c)
                continue
            split = True
            keys = sorted(groups)
            trace.append((k, tuple((key, len(groups[key])) for key in keys)))
            for key in keys:
                new_cells.append(tuple(groups[key]))
        cells = new_cells
        if not split:
            return tuple(cells), tuple(trace)


def refine_partition(g: ColoredGraph, p: OrderedPartition) -> OrderedPartition:
    if p.m != g.m:
        raise ValueError("partition and graph sizes differ")
    cells, _ = _refine(g, p.cells)
    return OrderedPartition(cells)


class _Search:
    def __init__(self, g: ColoredGraph, budget: int):
        self.g = g
        self.budget = budget
        self.expanded = 0

    def tick(self):
        self.expanded += 1
        if self.expanded > self.budget:
            raise SearchBudgetExceeded(f"automorphism search exceeded {self.budget} nodes")

    def child(self, cells, v):
        self.tick()
        return _refine(self.g, _individualize(cells, v))

    def run(self) -> list[Permutation]:
        g = self.g
        m = g.m
        cells, trace = _refine(g, ((tuple(range(m)),)))
        # first path: always individualize the smallest node of the first
        # non-singleton cell
        path = []  # (cells, trace, target cell index) for every inner node
        while len(cells) < m:
            t = next(k for k, c in enumerate(cells) if len(c) > 1)
            path.append((cells, trace, t))
            cells, trace = self.child(cells, cells[t][0])
        self.first_traces = [tr for _, tr, _ in path] + [trace]
        self.first_shapes = [tuple(map(len, c)) for c, _, _ in path] + [tuple(map(len, cells))]
        self.leaf0 = [c[0] for c in cells]

        gens: list[Permutation] = []
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for depth in range(len(path) - 1, -1, -1):
            cells_k, _, t = path[depth]
            v = cells_k[t][0]
            tried = [v]
            for w in cells_k[t][1:]:
                rw = find(w)
                if any(find(x) == rw for x in tried):
                    continue
                tried.append(w)
                perm = self.descend(self.child(cells_k, w), depth + 1)
                if perm is not None:
                    gens.append(perm)
                    for i, j in enumerate(perm.image):
                        ri, rj = find(i), find(j)
                        if ri != rj:
                            parent[max(ri, rj)] = min(ri, rj)
        return gens

    def descend(self, node, depth) -> Permutation | None:
        cells, trace = node
        if trace != self.first_traces[depth] or tuple(map(len, cells)) != self.first_shapes[depth]:
            return None
        if len(cells) == self.g.m:
            img = [0] * self.g.m
            for a, c in zip(self.leaf0, cells):
                img[a] = c[0]
            if self.g.preserves(img):
                return Permutation(img)
            return None
        t = next(k for k, c in enumerate(cells) if len(c) > 1)
        for u in cells[t]:
            perm = self.descend(self.child(cells, u), depth + 1)
            if perm is not None:
                return perm
        return None


def automorphism_generators(g: ColoredGraph, budget: int | None = None) -> GeneratorSet:
    """Generators of the color-preserving permutations of ``g``.

    At most ``m - 1`` permutations come back: each one found merges two
    orbits of the group generated so far.
    """
    if g.m < 1:
        raise ValueError("graph has no nodes")
    if budget is None:
        budget = default_search_budget()
    gens = _Search(g, budget).run()
    return GeneratorSet(tuple(gens), g.m)


def witness_key(p: Permutation):
    """Canonical generator order: higher element order first, then by image."""
    return (-p.order(), p.image)


def sift_generators(gens: GeneratorSet) -> GeneratorSet:
    """Shrink a generating set to at most ``m - 1`` non-redundant elements.

    Candidates are the input generators and their pairwise products, taken in
    :func:`witness_key` order; each is kept only if a Schreier-Sims stabilizer
    chain of the ones kept so far does not already contain it.  Preferring
    high-order elements keeps cyclic pieces to a single generator.  If the
    greedy pass ever ends above ``m - 1`` elements, Jerrum's filter output is
    returned instead, which meets the bound by construction.
    """
    m = gens.m
    base = jerrum_filter([g for g in gens.generators if not g.is_identity()], m)
    pool = set(base)
    for a in base:
        for b in base:
            if a is not b:
                pool.add(a * b)
    pool.discard(Permutation.identity(m))
    target = StabilizerChain(m, base).order()
    chain = StabilizerChain(m)
    kept = []
    for g in sorted(pool, key=witness_key):
        if chain.add(g):
            kept.append(g)
            if chain.order() == target:
                break
    if len(kept) > max(m - 1, 0):
        kept = base
    return GeneratorSet(tuple(sorted(kept, key=witness_key)), m)


def brute_force_automorphisms(g: ColoredGraph, cap: int = DEFAULT_BRUTE_CAP) -> list[Permutation]:
    if g.m > cap:
        raise TooLarge(f"{g.m}! permutations is beyond the brute-force cap of {cap} nodes")
    return [Permutation(p) for p in itertools.permutations(range(g.m)) if g.preserves(p)]


def expand_group(gens: GeneratorSet | Sequence[Permutation], cap: int = 10_000, m: int | None = None):
    """All elements of the group generated by ``gens`` (identity first)."""
    if isinstance(gens, GeneratorSet):
        m, gens = gens.m, list(gens.generators)
    elif m is None:
        if not gens:
            raise ValueError("degree unknown for an empty generator list")
        m = len(gens[0])
    return closure(list(gens), m, cap)

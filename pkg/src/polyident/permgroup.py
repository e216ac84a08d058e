"""Permutations of {0..m-1} and the group machinery built on them.

Composition follows the matrix convention: ``(p * q)(i) == p(q(i))``, so the
permutation matrix of ``p * q`` is ``P @ Q`` where ``P[p(j), j] == 1``.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "StabilizerChain",
    "CapExceeded",
    "jerrum_filter",
    "closure",
]


class CapExceeded(RuntimeError):
    pass


class Permutation:
    """A bijection on ``range(len(image))`` given by its image array."""

    __slots__ = ("image",)

    def __init__(self, image: Iterable[int]):
        image = tuple(int(i) for i in image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"{image!r} is not a permutation")
        object.__setattr__(self, "image", image)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def _raw(cls, image: tuple) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "image", image)
        return p

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls._raw(tuple(range(m)))

    @classmethod
    def from_cycles(cls, m: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(m))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.image)

    def __len__(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __getitem__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        img = self.image
        return Permutation._raw(tuple(img[j] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(len(self.image))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def first_moved(self) -> int | None:
        return next((i for i, j in enumerate(self.image) if i != j), None)

    def order(self) -> int:
        from math import lcm

        out = 1
        for c in self.cycles():
            out = lcm(out, len(c))
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.image)):
            if i in seen or self.image[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.image[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.image[j]
            out.append(tuple(cyc))
        return out

    def matrix(self):
        """Permutation matrix with ``P[image[j], j] == 1``."""
        from .linalg import Mat

        m = len(self.image)
        one, zero = Fraction(1), Fraction(0)
        return Mat._raw(
            m, m, tuple(one if self.image[j] == i else zero for i in range(m) for j in range(m))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image == other.image

    def __lt__(self, other: "Permutation") -> bool:
        return self.image < other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def to_json(self) -> list[int]:
        return list(self.image)


class StabilizerChain:
    """Base and strong generating set built by deterministic Schreier-Sims.

    Level ``i`` uses every strong generator fixing ``base[:i]`` pointwise and
    keeps a transversal of the orbit of ``base[i]`` under them.  Every
    Schreier generator of every level sifts to the identity once
    :meth:`add` returns, so :meth:`contains` is an exact membership test.
    """

    def __init__(self, m: int, gens: Iterable[Permutation] = ()):
        self.m = m
        self.base: list[int] = []
        self.strong: list[Permutation] = []
        # trans[i][x] maps base[i] to x
        self.trans: list[dict[int, Permutation]] = []
        for g in gens:
            self.add(g)

    def _level_gens(self, i: int) -> list[Permutation]:
        pts = self.base[:i]
        return [s for s in self.strong if all(s.image[b] == b for b in pts)]

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        gens = self._level_gens(i)
        trans = {b: Permutation.identity(self.m)}
        queue = [b]
        for y in queue:
            for s in gens:
                z = s.image[y]
                if z not in trans:
                    trans[z] = s * trans[y]
                    queue.append(z)
        if i < len(self.trans):
            self.trans[i] = trans
        else:
            self.trans.append(trans)

    def sift(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Strip ``g`` through levels ``start..``; return the residue and the
        level where stripping stopped (``len(base)`` if it got through)."""
        for i in range(start, len(self.base)):
            x = g.image[self.base[i]]
            u = self.trans[i].get(x)
            if u is None:
                return g, i
            if x != self.base[i]:
                g = u.inverse() * g
        return g, len(self.base)

    def contains(self, g: Permutation) -> bool:
        if len(g) != self.m:
            return False
        residue, _ = self.sift(g)
        return residue.is_identity()

    def _new_strong(self, g: Permutation, level: int) -> None:
        # g fixes base[:level] and is not the identity
        self.strong.append(g)
        if level == len(self.base):
            self.base.append(g.first_moved())
        for k in range(level + 1):
            self._orbit(k)

    def add(self, g: Permutation) -> bool:
        """Extend the group by ``g``; returns False if ``g`` was already a member."""
        residue, level = self.sift(g)
        if residue.is_identity():
            return False
        self._new_strong(residue, level)
        i = len(self.base) - 1
        while i >= 0:
            found = None
            for x, u in self.trans[i].items():
                for s in self._level_gens(i):
                    h = self.trans[i][s.image[x]].inverse() * s * u
                    if h.is_identity():
                        continue
                    residue, j = self.sift(h, i + 1)
                    if not residue.is_identity():
                        found = residue, j
                        break
                if found:
                    break
            if found:
                self._new_strong(*found)
                i = found[1]
            else:
                i -= 1
        return True

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def strong_generators(self) -> list[Permutation]:
        return list(self.strong)


def jerrum_filter(gens: Iterable[Permutation], m: int) -> list[Permutation]:
    """Replace ``gens`` by at most ``m - 1`` permutations generating the same group.

    Each kept generator ``g`` labels the edge ``{i, g(i)}`` with ``i`` the
    smallest point ``g`` moves, and the kept edges always form a forest.  An
    incoming element that would close a cycle is multiplied around the cycle,
    which yields an element fixing every point up to the cycle's minimum; one
    cycle edge at that minimum is dropped and the product is filtered in turn.
    """
    edges: dict[int, tuple[Permutation, int, int]] = {}
    next_id = 0

    def path(a: int, b: int):
        # BFS over the forest; returns [(edge_id, from, to), ...] from a to b
        adj: dict[int, list[tuple[int, int]]] = {}
        for eid, (_, x, y) in edges.items():
            adj.setdefault(x, []).append((eid, y))
            adj.setdefault(y, []).append((eid, x))
        prev = {a: None}
        q = deque([a])
        while q:
            x = q.popleft()
            if x == b:
                break
            for eid, y in sorted(adj.get(x, ())):
                if y not in prev:
                    prev[y] = (eid, x)
                    q.append(y)
        if b not in prev:
            return None
        out = []
        x = b
        while prev[x] is not None:
            eid, w = prev[x]
            out.append((eid, w, x))
            x = w
        out.reverse()
        return out

    for h in gens:
        if len(h) != m:
            raise ValueError("generator degree mismatch")
        guard = 0
        while not h.is_identity():
            guard += 1
            if guard > 4 * m * m + 16:
                raise RuntimeError("Jerrum filter failed to converge")
            i = h.first_moved()
            j = h.image[i]
            p = path(i, j)
            new_id = next_id
            next_id += 1
            if p is None:
                edges[new_id] = (h, i, j)
                break
            edges[new_id] = (h, i, j)
            # cycle: i -> ... -> j along the forest, then j -> i along the new edge
            steps = p + [(new_id, j, i)]
            verts = [s[1] for s in steps]
            k = min(verts)
            start = verts.index(k)
            steps = steps[start:] + steps[:start]
            prod = Permutation.identity(m)
            for eid, x, y in steps:
                g, a, _ = edges[eid]
                step = g if a == x else g.inverse()
                prod = step * prod
            del edges[steps[0][0]]
            h = prod
    return [g for _, (g, _, _) in sorted(edges.items())]


def closure(gens: Sequence[Permutation], m: int, cap: int | None = None) -> list[Permutation]:
    """Breadth-first closure of ``gens`` under composition, starting at the identity.

    Raises :class:`CapExceeded` once more than ``cap`` elements are found.
    """
    e = Permutation.identity(m)
    seen = {e}
    out = [e]
    q = deque([e])
    while q:
        x = q.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                seen.add(y)
                out.append(y)
                if cap is not None and len(out) > cap:
                    raise CapExceeded(f"group has more than {cap} elements")
                q.append(y)
    return out

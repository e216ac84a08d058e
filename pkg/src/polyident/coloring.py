"""The projection matrix ``C = V^T (V V^T)^{-1} V`` and the edge-colored
complete graph it defines on the vertices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Mat, RankDeficient, right_pseudoinverse
from .polytope import Polytope

__all__ = ["ColoringMatrix", "ColoredGraph", "coloring_matrix", "build_colored_graph"]


@dataclass(frozen=True)
class ColoringMatrix:
    c: Mat

    @property
    def m(self) -> int:
        return self.c.rows


@dataclass(frozen=True)
class ColoredGraph:
    """Complete graph on ``m`` nodes with colored nodes and edges.

    Colors are indices into ``palette``, the sorted distinct entries of C, so
    two cells share a color exactly when their C entries are equal.
    """

    m: int
    node_color: tuple[int, ...]
    edge_color: tuple[tuple[int, ...], ...]
    palette: tuple[Fraction, ...]

    def preserves(self, image) -> bool:
        """Does the node map ``i -> image[i]`` preserve all colors?"""
        nc, ec = self.node_color, self.edge_color
        for i in range(self.m):
            pi = image[i]
            if nc[pi] != nc[i]:
                return False
            row, prow = ec[i], ec[pi]
            for j in range(i + 1, self.m):
                if prow[image[j]] != row[j]:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "node_color": list(self.node_color),
            "edge_color": [list(r) for r in self.edge_color],
            "palette": [str(x) for x in self.palette],
        }

    @classmethod
    def from_colors(cls, node_color, edge_color) -> "ColoredGraph":
        """Graph from integer color labels (useful for tests); labels are
        re-indexed densely, node colors and edge colors sharing one palette."""
        m = len(node_color)
        values = sorted(set(node_color) | {edge_color[i][j] for i in range(m) for j in range(m) if i != j})
        idx = {v: k for k, v in enumerate(values)}
        ec = tuple(
            tuple(idx[edge_color[i][j]] if i != j else idx[node_color[i]] for j in range(m))
            for i in range(m)
        )
        for i in range(m):
            for j in range(m):
                if ec[i][j] != ec[j][i]:
                    raise ValueError("edge colors must be symmetric")
        return cls(m, tuple(idx[c] for c in node_color), ec, tuple(Fraction(v) for v in values))


def coloring_matrix(p: Polytope) -> ColoringMatrix:
    v = p.vertex_matrix
    if v.rows > v.cols:
        raise RankDeficient(f"{v.cols} vertices cannot span R^{v.rows}")
    # V^T Q^{-1} V is V^dagger V for the right pseudoinverse V^dagger = V^T Q^{-1}
    return ColoringMatrix(right_pseudoinverse(v) @ v)


def build_colored_graph(c: ColoringMatrix) -> ColoredGraph:
    mat = c.c
    m = mat.rows
    palette = tuple(sorted(set(mat.entries)))
    idx = {x: k for k, x in enumerate(palette)}
    # diagonal entries double as node colors
    edge = tuple(tuple(idx[mat[i, j]] for j in range(m)) for i in range(m))
    node = tuple(edge[i][i] for i in range(m))
    return ColoredGraph(m, node, edge, palette)

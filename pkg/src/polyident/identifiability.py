"""Identifiability decision for polytopes.

A polytope with vertex matrix ``V`` is identifiable when every linear map
``G`` with ``G V = V P`` for some permutation matrix ``P`` is a signed
permutation.  :func:`check_identifiability` only inspects a generating set
of the color-preserving permutations of the coloring graph;
:func:`brute_force_identifiability` sweeps all ``m!`` permutations and is
kept as the reference.
"""

from __future__ import annotations

import functools
import itertools
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .automorphism import (
    DEFAULT_BRUTE_CAP,
    TooLarge,
    automorphism_generators,
    sift_generators,
    witness_key,
)
from .coloring import build_colored_graph, coloring_matrix
from .linalg import (
    Mat,
    decompose_signed_permutation,
    determinant,
    invert,
    is_signed_permutation,
    right_pseudoinverse,
)
from .permgroup import Permutation
from .polytope import Polytope, validate_polytope

__all__ = [
    "InvalidPolytope",
    "AutomorphismWitness",
    "IdentifiabilityReport",
    "linear_map_for",
    "check_identifiability",
    "brute_force_identifiability",
    "verify_theorem_3_1",
    "solution_permutations",
]


class InvalidPolytope(ValueError):
    def __init__(self, reasons, details=()):
        self.reasons = list(reasons)
        super().__init__("; ".join(details) or ", ".join(self.reasons))


@dataclass(frozen=True)
class AutomorphismWitness:
    perm: Permutation
    linear_map: Mat
    signed_perm: bool
    decomposition: tuple | None = None

    @classmethod
    def build(cls, perm: Permutation, g: Mat) -> "AutomorphismWitness":
        if is_signed_permutation(g):
            return cls(perm, g, True, decompose_signed_permutation(g))
        return cls(perm, g, False, None)

    @property
    def det(self) -> Fraction:
        return determinant(self.linear_map)

    def to_json(self) -> dict:
        out = {
            "perm": self.perm.to_json(),
            "G": self.linear_map.to_json(),
            "signed_perm": self.signed_perm,
        }
        if self.decomposition is not None:
            signs, pbar = self.decomposition
            out["signs"] = list(signs)
            out["perm_bar"] = pbar.to_json()
        return out


@dataclass
class IdentifiabilityReport:
    identifiable: bool
    generator_witnesses: list[AutomorphismWitness]
    counterexample: AutomorphismWitness | None
    method: str
    elapsed_ns: int
    num_generators: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def elapsed_ms(self) -> float:
        return self.elapsed_ns / 1e6

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "schema_version": 1,
            "identifiable": self.identifiable,
            "method": self.method,
            "num_generators": self.num_generators,
            "generators": [w.to_json() for w in self.generator_witnesses],
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


@functools.lru_cache(maxsize=512)
def _pinv(v: Mat) -> Mat:
    return right_pseudoinverse(v)


def _require_valid(p: Polytope) -> None:
    res = validate_polytope(p)
    if not res.ok:
        raise InvalidPolytope(res.reasons, res.details)


def _perm_columns(v: Mat, perm: Permutation) -> Mat:
    # V @ P where P[image[j], j] = 1: column j of the product is column image[j] of V
    return v.select_columns(perm.image)


def linear_map_for(p: Polytope, perm: Permutation) -> Mat | None:
    """The unique ``G`` with ``G V = V P``, or None if there is none.

    Any solution must equal ``V P V^dagger`` because ``V`` has full row rank,
    so only that candidate is checked.
    """
    v = p.vertex_matrix
    if len(perm) != v.cols:
        raise ValueError(f"permutation of degree {len(perm)} for {v.cols} vertices")
    vp = _perm_columns(v, perm)
    g = vp @ _pinv(v)
    if g @ v == vp:
        return g
    return None


def check_identifiability(p: Polytope, budget: int | None = None) -> IdentifiabilityReport:
    """Decide identifiability from a generating set of the automorphism group.

    Stops at the first generator whose linear map is not a signed
    permutation and reports it as the counterexample.
    """
    start = time.perf_counter_ns()
    _require_valid(p)
    graph = build_colored_graph(coloring_matrix(p))
    gens = sift_generators(automorphism_generators(graph, budget))
    witnesses = []
    counterexample = None
    for perm in gens:
        g = linear_map_for(p, perm)
        if g is None:
            # color-preserving permutations always admit a linear map
            raise AssertionError(f"no linear map for graph automorphism {perm!r}")
        w = AutomorphismWitness.build(perm, g)
        witnesses.append(w)
        if not w.signed_perm:
            counterexample = w
            break
    elapsed = time.perf_counter_ns() - start
    return IdentifiabilityReport(
        counterexample is None, witnesses, counterexample, "generator_based", elapsed, len(gens)
    )


# ---------------------------------------------------------------------------
# brute force

_TAIL = 8  # permutations of the last _TAIL positions are tabulated once


@functools.lru_cache(maxsize=None)
def _perm_table(k: int) -> np.ndarray:
    # all permutations of range(k), lexicographic
    return np.array(list(itertools.permutations(range(k))), dtype=np.intp).reshape(-1, k)


def _permutation_chunks(m: int):
    """Every permutation of ``range(m)`` in lexicographic order, in blocks."""
    k = min(m, _TAIL)
    table = _perm_table(k)
    if k == m:
        yield table
        return
    for prefix in itertools.permutations(range(m), m - k):
        rest = np.array(sorted(set(range(m)) - set(prefix)), dtype=np.intp)
        block = np.empty((table.shape[0], m), dtype=np.intp)
        block[:, : m - k] = prefix
        block[:, m - k:] = rest[table]
        yield block


def _lcm_denominators(values) -> int:
    d = 1
    for x in values:
        d = d * x.denominator // math.gcd(d, x.denominator)
    return d


class _Sweep:
    """Integer data of every permutation admitting a linear map.

    ``dg[k]`` is ``d * G`` for the ``k``-th solution, ``signed[k]`` whether
    that ``G`` is a signed permutation.
    """

    def __init__(self, n, d, images, dg, signed):
        self.n = n
        self.d = d
        self.images = images
        self.dg = dg
        self.signed = signed

    def linear_map(self, k: int) -> Mat:
        d = self.d
        return Mat._raw(self.n, self.n, tuple(Fraction(int(x), d) for x in self.dg[k].reshape(-1)))


def _sweep(p: Polytope) -> _Sweep:
    """Test every one of the ``m!`` permutations ``P`` for a solution of
    ``G V = V P``.

    For each permutation the candidate ``G = V P V^dagger`` is formed and
    ``G V == V P`` is checked, vectorized over blocks of permutations.  All
    arithmetic is on integers: ``V`` is scaled to an integer matrix (which
    leaves the solution set unchanged) and ``V^dagger`` by the common
    denominator ``d`` of its entries, so ``d G`` is integral.  Products are
    carried out in float64 (BLAS) when every intermediate integer stays below
    2**53 and is therefore exact, in int64 below 2**62, and in Python-int
    object arrays beyond that.
    """
    v = p.vertex_matrix
    n, m = v.rows, v.cols
    scale = _lcm_denominators(v.entries)
    v_int = [[int(x * scale) for x in v.row(i)] for i in range(n)]
    # V^dagger = V^T Q^{-1}; only the n x n inverse needs rationals
    q = [[sum(a * b for a, b in zip(v_int[i], v_int[j])) for j in range(n)] for i in range(n)]
    q_inv = invert(Mat.from_rows(q, n))
    dq = _lcm_denominators(q_inv.entries)
    q_int = [[int(x * dq) for x in q_inv.row(i)] for i in range(n)]
    w_int = [
        [sum(v_int[k][j] * q_int[k][i] for k in range(n)) for i in range(n)] for j in range(m)
    ]
    # reduce the common factor so d is the exact denominator of V^dagger
    g = dq
    for row in w_int:
        for x in row:
            g = math.gcd(g, x)
    d = dq // g
    w_int = [[x // g for x in row] for row in w_int]

    vmax = max((abs(x) for r in v_int for x in r), default=0)
    wmax = max((abs(x) for r in w_int for x in r), default=0)
    bound = max(n * m * vmax * wmax * vmax, d * vmax)
    if bound < 2**53:
        dtype = np.float64
    elif bound < 2**62:
        dtype = np.int64
    else:
        dtype = object
    V = np.array(v_int, dtype=dtype)
    W = np.array(w_int, dtype=dtype)

    images, dgs = [], []
    for block in _permutation_chunks(m):
        k = len(block)
        vp = V[:, block].transpose(1, 0, 2)  # (K, n, m): V P per permutation
        dg = (vp.reshape(k * n, m) @ W).reshape(k, n, n)  # d * G
        lhs = (dg.reshape(k * n, n) @ V).reshape(k, n, m)
        ok = np.all(lhs == d * vp, axis=(1, 2))
        hits = np.flatnonzero(ok)
        if hits.size:
            images.append(block[hits])
            dgs.append(dg[hits])
    if images:
        images = np.concatenate(images)
        dg = np.concatenate(dgs)
        if dtype is np.float64:
            dg = dg.astype(np.int64)
        nz = dg != 0
        signed = (
            np.all(~nz | (np.abs(dg) == d), axis=(1, 2))
            & np.all(nz.sum(axis=1) == 1, axis=1)
            & np.all(nz.sum(axis=2) == 1, axis=1)
        )
    else:
        images = np.empty((0, m), dtype=np.intp)
        dg = np.empty((0, n, n), dtype=np.int64 if dtype is np.float64 else dtype)
        signed = np.empty(0, dtype=bool)
    return _Sweep(n, d, images, dg, signed)


class _LazyWitnesses(Sequence):
    """Witness list that builds exact matrices only when an entry is read."""

    def __init__(self, sweep: _Sweep):
        self._sweep = sweep
        self._cache: dict[int, AutomorphismWitness] = {}

    def __len__(self) -> int:
        return len(self._sweep.images)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        w = self._cache.get(k)
        if w is None:
            perm = Permutation(int(x) for x in self._sweep.images[k])
            w = AutomorphismWitness.build(perm, self._sweep.linear_map(k))
            self._cache[k] = w
        return w


def solution_permutations(p: Polytope) -> list[tuple[Permutation, Mat]]:
    """Every permutation (lexicographic order) whose linear map exists, with that map."""
    sw = _sweep(p)
    return [
        (Permutation(int(x) for x in sw.images[k]), sw.linear_map(k)) for k in range(len(sw.images))
    ]


def brute_force_identifiability(p: Polytope, cap: int = DEFAULT_BRUTE_CAP) -> IdentifiabilityReport:
    """Check every one of the ``m!`` vertex permutations directly.

    Every permutation admitting a linear map is recorded as a witness, in
    lexicographic order.  The counterexample is the failing witness that
    comes first in :func:`~polyident.automorphism.witness_key` order, the
    same order the generator-based check tests its generators in.
    """
    start = time.perf_counter_ns()
    _require_valid(p)
    m = p.num_vertices
    if m > cap:
        raise TooLarge(f"{m}! permutations is beyond the brute-force cap of {cap} vertices")
    sweep = _sweep(p)
    witnesses = _LazyWitnesses(sweep)
    failing = np.flatnonzero(~sweep.signed)
    counterexample = None
    if failing.size:
        k = min(failing, key=lambda i: witness_key(Permutation._raw(tuple(int(x) for x in sweep.images[i]))))
        counterexample = witnesses[int(k)]
    elapsed = time.perf_counter_ns() - start
    return IdentifiabilityReport(
        counterexample is None, witnesses, counterexample, "brute_force", elapsed, len(witnesses)
    )


def verify_theorem_3_1(p: Polytope, perm: Permutation) -> bool:
    """``G V = V P`` is solvable exactly when ``P^T C P == C``."""
    c = coloring_matrix(p).c
    img = perm.image
    m = c.cols
    graph_side = all(c[img[i], img[j]] == c[i, j] for i in range(m) for j in range(m))
    linear_side = linear_map_for(p, perm) is not None
    return graph_side == linear_side

"""Polytopes in H- and V-representation, vertex enumeration, validation and
the random sparse-constraint polytope generator."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import fm
from .linalg import Mat, Singular, rank, solve, to_rational

__all__ = [
    "PolytopeError",
    "EmptyPolytope",
    "UnboundedPolytope",
    "TooManyFacets",
    "InvalidConfig",
    "Polytope",
    "HRepresentation",
    "SparsityConstraint",
    "GeneratorConfig",
    "ValidationResult",
    "enumerate_vertices",
    "check_bounded",
    "validate_polytope",
    "random_polytope_hrep",
    "sample_generator_config",
    "config_from_seed",
    "DEFAULT_FACET_CAP",
]

DEFAULT_FACET_CAP = 2_000_000


class PolytopeError(ValueError):
    pass


class EmptyPolytope(PolytopeError):
    pass


class UnboundedPolytope(PolytopeError):
    pass


class TooManyFacets(PolytopeError):
    pass


class InvalidConfig(PolytopeError):
    pass


@dataclass(frozen=True)
class Polytope:
    """A polytope given by its vertex matrix (one vertex per column)."""

    vertex_matrix: Mat
    label: str | None = None
    # provenance (generator config etc.); excluded from equality
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_vertices(cls, vertices: Sequence[Sequence], label: str | None = None, meta=None):
        vertices = [list(v) for v in vertices]
        if not vertices:
            raise ValueError("a polytope needs at least one vertex")
        n = len(vertices[0])
        return cls(Mat.from_columns(vertices, rows=n), label, dict(meta or {}))

    @property
    def dim(self) -> int:
        return self.vertex_matrix.rows

    @property
    def num_vertices(self) -> int:
        return self.vertex_matrix.cols

    def vertices(self) -> list[tuple[Fraction, ...]]:
        return self.vertex_matrix.columns()

    def scaled(self, alpha) -> "Polytope":
        return Polytope(self.vertex_matrix.scale(alpha), self.label, dict(self.meta))


@dataclass(frozen=True)
class HRepresentation:
    """The polyhedron ``{x : A x <= b}``."""

    a_matrix: Mat
    b_vector: tuple[Fraction, ...]

    def __post_init__(self):
        b = tuple(to_rational(x) for x in self.b_vector)
        object.__setattr__(self, "b_vector", b)
        if len(b) != self.a_matrix.rows:
            raise ValueError(f"A has {self.a_matrix.rows} rows but b has {len(b)} entries")
        for i in range(self.a_matrix.rows):
            if not any(self.a_matrix.row(i)):
                raise ValueError(f"row {i} of A is zero")

    @classmethod
    def from_rows(cls, a_rows: Sequence[Sequence], b: Sequence, dim: int | None = None):
        a_rows = [list(r) for r in a_rows]
        if dim is None:
            if not a_rows:
                raise ValueError("cannot infer the dimension of an empty system")
            dim = len(a_rows[0])
        return cls(Mat.from_rows(a_rows, cols=dim), tuple(b))

    @property
    def dim(self) -> int:
        return self.a_matrix.cols

    @property
    def num_facets(self) -> int:
        return self.a_matrix.rows

    def rows(self):
        return [(self.a_matrix.row(i), self.b_vector[i]) for i in range(self.a_matrix.rows)]

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(sum(a * xi for a, xi in zip(r, x)) <= b for r, b in self.rows())


@dataclass(frozen=True)
class SparsityConstraint:
    """``||x[indices]||_1 <= 1``."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))


@dataclass(frozen=True)
class GeneratorConfig:
    dim: int
    seed: int
    # True: coordinate in [-1, 1]; False: coordinate in [0, 1]
    sign_pattern: tuple[bool, ...]
    constraints: tuple[SparsityConstraint, ...] = ()

    def validate(self) -> None:
        n = self.dim
        if n < 2:
            raise InvalidConfig(f"dimension must be at least 2, got {n}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be an unsigned 64-bit integer")
        if len(self.sign_pattern) != n:
            raise InvalidConfig("sign_pattern length differs from dim")
        if self.constraints and not 2 <= len(self.constraints) <= n:
            raise InvalidConfig(f"constraint count {len(self.constraints)} outside 2..{n}")
        for c in self.constraints:
            idx = c.indices
            if not 2 <= len(idx) <= n:
                raise InvalidConfig(f"constraint length {len(idx)} outside 2..{n}")
            if len(set(idx)) != len(idx) or any(not 0 <= i < n for i in idx):
                raise InvalidConfig(f"bad constraint indices {idx}")

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "seed": self.seed,
            "signed": [bool(s) for s in self.sign_pattern],
            "constraints": [list(c.indices) for c in self.constraints],
        }

    @classmethod
    def from_json(cls, d: dict) -> "GeneratorConfig":
        return cls(
            int(d["dim"]),
            int(d["seed"]),
            tuple(bool(s) for s in d["signed"]),
            tuple(SparsityConstraint(tuple(c)) for c in d["constraints"]),
        )


@dataclass
class ValidationResult:
    ok: bool
    reasons: list[str] = field(default_factory=list)
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# boundedness and validation


def check_bounded(h: HRepresentation) -> bool:
    """True iff the recession cone ``{d : A d <= 0}`` is ``{0}``.

    For every coordinate ``i`` and sign ``s`` the system
    ``{A d <= 0, s d_i = 1}`` must be infeasible.
    """
    n = h.dim
    rows = [(list(h.a_matrix.row(i)), Fraction(0)) for i in range(h.num_facets)]
    for i in range(n):
        for s in (1, -1):
            e = [Fraction(0)] * n
            e[i] = Fraction(s)
            if fm.feasible(rows, [(e, Fraction(1))], nvars=n):
                return False
    return True


def _is_convex_combination(target, others) -> bool:
    # lambda >= 0, sum lambda = 1, sum lambda_k v_k = target
    k = len(others)
    if k == 0:
        return False
    n = len(target)
    eqs = [([Fraction(1)] * k, Fraction(1))]
    for r in range(n):
        eqs.append(([v[r] for v in others], target[r]))
    ineqs = []
    for j in range(k):
        a = [Fraction(0)] * k
        a[j] = Fraction(-1)
        ineqs.append((a, Fraction(0)))
    return fm.feasible(ineqs, eqs, nvars=k)


def validate_polytope(p: Polytope, strict: bool = False) -> ValidationResult:
    v = p.vertex_matrix
    n, m = v.rows, v.cols
    res = ValidationResult(True)

    def fail(code, msg):
        res.ok = False
        res.reasons.append(code)
        res.details.append(msg)

    if n == 0:
        fail("EmptyDimension", "vertex matrix has no rows")
        return res
    if n > m:
        fail("TooFewVertices", f"{m} vertices cannot span R^{n}")
    r = rank(v)
    if r != n:
        fail("RankDeficient", f"rank(V) = {r}, expected {n}")
    cols = v.columns()
    seen = {}
    for j, c in enumerate(cols):
        if c in seen:
            fail("DuplicateVertex", f"columns {seen[c]} and {j} coincide")
        else:
            seen[c] = j
    if strict:
        for j, c in enumerate(cols):
            others = [x for k, x in enumerate(cols) if k != j and x != c]
            if _is_convex_combination(c, others):
                fail("NotExtreme", f"column {j} is a convex combination of the others")
    return res


# ---------------------------------------------------------------------------
# vertex enumeration


def _lex_sorted(points) -> list[tuple[Fraction, ...]]:
    return sorted(set(points))


def _basis_enumeration(h: HRepresentation, facet_cap: int):
    n, f = h.dim, h.num_facets
    count = math.comb(f, n)
    if count > facet_cap:
        raise TooManyFacets(f"C({f},{n}) = {count} basis candidates exceeds cap {facet_cap}")
    rows = [h.a_matrix.row(i) for i in range(f)]
    b = h.b_vector
    found = set()
    for subset in itertools.combinations(range(f), n):
        a_sub = Mat._raw(n, n, tuple(x for i in subset for x in rows[i]))
        try:
            x = solve(a_sub, Mat._raw(n, 1, tuple(b[i] for i in subset))).entries
        except Singular:
            continue
        if all(sum(a * xi for a, xi in zip(rows[i], x)) <= b[i] for i in range(f)):
            found.add(x)
    return found


def _primitive(vec: list[int]) -> list[int]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in vec]
    return vec


def _double_description(h: HRepresentation):
    """Extreme rays of the homogenized cone ``{(t, x) : t b - A x >= 0, t >= 0}``.

    Integer arithmetic throughout; adjacency is decided combinatorially from
    the zero sets (bitmasks over processed constraints).
    """
    n = h.dim
    d = n + 1
    cons = [[0] * d]
    cons[0][0] = 1
    for a, bi in h.rows():
        den = bi.denominator
        for x in a:
            den = den * x.denominator // math.gcd(den, x.denominator)
        cons.append(_primitive([int(bi * den)] + [int(-x * den) for x in a]))

    # initial basis: first d linearly independent constraints
    basis = []
    for i, c in enumerate(cons):
        trial = basis + [i]
        if rank(Mat.from_rows([cons[k] for k in trial], d)) == len(trial):
            basis = trial
            if len(basis) == d:
                break
    if len(basis) < d:
        # the cone contains a line, so the polyhedron does too
        raise UnboundedPolytope("polyhedron is not pointed (contains a line)")

    inv = _integer_inverse_columns([cons[k] for k in basis])
    rays = []  # (vector, zero-mask over constraint indices)
    for k, r in enumerate(inv):
        mask = 0
        for kk, ci in enumerate(basis):
            if kk != k:
                mask |= 1 << ci
        rays.append((r, mask))

    processed = set(basis)
    for ci, c in enumerate(cons):
        if ci in processed:
            continue
        processed.add(ci)
        pos, neg, zero = [], [], []
        for r, mask in rays:
            s = sum(x * y for x, y in zip(c, r))
            if s > 0:
                pos.append((r, mask, s))
            elif s < 0:
                neg.append((r, mask, s))
            else:
                zero.append((r, mask | (1 << ci)))
        if not neg:
            rays = [(r, m) for r, m, _ in pos] + zero
            continue
        all_masks = [m for _, m, _ in pos] + [m for _, m, _ in neg] + [m for _, m in zero]
        new = []
        for rp, mp, sp in pos:
            for rn, mn, sn in neg:
                common = mp & mn
                if bin(common).count("1") < d - 2:
                    continue
                adjacent = True
                for mo in all_masks:
                    if mo & common == common and mo != mp and mo != mn:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vec = _primitive([sp * y - sn * x for x, y in zip(rp, rn)])
                new.append((vec, common | (1 << ci)))
        rays = [(r, m) for r, m, _ in pos] + zero + new
    return rays


def _integer_inverse_columns(rows: list[list[int]]) -> list[list[int]]:
    """Columns of the inverse of a nonsingular integer matrix, each scaled to a
    primitive integer vector with the same direction."""
    d = len(rows)
    inv = solve(Mat.from_rows(rows, d), Mat.identity(d))
    out = []
    for j in range(d):
        col = inv.col(j)
        den = 1
        for x in col:
            den = den * x.denominator // math.gcd(den, x.denominator)
        out.append(_primitive([int(x * den) for x in col]))
    return out


def enumerate_vertices(
    h: HRepresentation,
    check_bounded_first: bool = False,
    facet_cap: int = DEFAULT_FACET_CAP,
    method: str = "dd",
    label: str | None = None,
) -> Polytope:
    """Vertices of ``{x : A x <= b}``, exact and in lexicographic order.

    ``method="basis"`` solves every n-subset of rows and keeps the feasible
    solutions (capped at ``facet_cap`` subsets).  ``method="dd"`` runs the
    double description method on the homogenized cone, which stays fast for
    the several-hundred-row systems the generator produces in dimension 5+.
    Both return identical vertex sets.
    """
    if check_bounded_first and not check_bounded(h):
        raise UnboundedPolytope("recession cone is nontrivial")
    if method == "basis":
        pts = _basis_enumeration(h, facet_cap)
    elif method == "dd":
        rays = _double_description(h)
        pts = set()
        unbounded = False
        for r, _ in rays:
            t = r[0]
            if t > 0:
                pts.add(tuple(Fraction(x, t) for x in r[1:]))
            elif any(r):
                unbounded = True
        if pts and unbounded:
            raise UnboundedPolytope("polyhedron has extreme rays")
    else:
        raise ValueError(f"unknown method {method!r}")
    if not pts:
        raise EmptyPolytope("no feasible basic solution")
    return Polytope.from_vertices(_lex_sorted(pts), label=label)


# ---------------------------------------------------------------------------
# random generator


def sample_generator_config(n: int, rng: random.Random, seed: int = 0) -> GeneratorConfig:
    """Draw a random sign pattern and sparsity constraints in dimension ``n``.

    ``rng`` is a :class:`random.Random` (Mersenne Twister); only
    ``random()``, ``randint()`` and ``sample()`` are used, whose outputs are
    stable across platforms for a given seed.
    """
    if n < 2:
        raise InvalidConfig(f"dimension must be at least 2, got {n}")
    signed = tuple(rng.random() < 0.5 for _ in range(n))
    q = rng.randint(2, n)
    constraints = []
    for _ in range(q):
        length = rng.randint(2, n)
        constraints.append(SparsityConstraint(tuple(sorted(rng.sample(range(n), length)))))
    return GeneratorConfig(n, seed, signed, tuple(constraints))


def config_from_seed(n: int, seed: int) -> GeneratorConfig:
    return sample_generator_config(n, random.Random(seed), seed=seed)


def random_polytope_hrep(config: GeneratorConfig) -> HRepresentation:
    """Box bounds per coordinate plus all ``2**l`` sign-pattern rows of each
    l1 sparsity constraint."""
    config.validate()
    n = config.dim
    rows, b = [], []
    for i, signed in enumerate(config.sign_pattern):
        e = [0] * n
        e[i] = 1
        rows.append(e)
        b.append(1)
        e = [0] * n
        e[i] = -1
        rows.append(e)
        b.append(1 if signed else 0)
    for c in config.constraints:
        for signs in itertools.product((1, -1), repeat=len(c.indices)):
            r = [0] * n
            for i, s in zip(c.indices, signs):
                r[i] = s
            rows.append(r)
            b.append(1)
    return HRepresentation.from_rows(rows, b, dim=n)

"""Exact rational matrices.

Everything here works over :class:`fractions.Fraction`; no floating point
value ever enters a comparison.  Matrices are small (n <= 10, m <= ~30), so
plain row-major tuples are plenty.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "LinalgError",
    "DimensionMismatch",
    "Singular",
    "RankDeficient",
    "NotSquare",
    "NotSignedPermutation",
    "Mat",
    "to_rational",
    "rational_str",
    "mat_mul",
    "invert",
    "rank",
    "right_pseudoinverse",
    "determinant",
    "is_signed_permutation",
    "decompose_signed_permutation",
]


class LinalgError(ValueError):
    pass


class DimensionMismatch(LinalgError):
    pass


class Singular(LinalgError):
    pass


class RankDeficient(LinalgError):
    pass


class NotSquare(LinalgError):
    pass


class NotSignedPermutation(LinalgError):
    pass


def to_rational(value) -> Fraction:
    """Convert an int, Fraction, or rational string to an exact Fraction.

    Strings may be integers, ``"p/q"``, or finite decimals (``"0.5"``,
    ``"-1.25e-2"``).  Floats are converted through their shortest repr so
    that ``0.1`` means one tenth, not the nearest binary double.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational string")
        if text.lower() in ("nan", "inf", "-inf", "+inf", "infinity", "-infinity"):
            raise ValueError(f"non-finite value {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rational_str(x: Fraction) -> str:
    return str(x)


class Mat:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(to_rational(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionMismatch(
                f"{len(entries)} entries cannot fill a {rows}x{cols} matrix"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: tuple) -> "Mat":
        # trusted constructor: entries already a tuple of Fractions
        self = object.__new__(cls)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Mat":
        return cls.from_rows(columns, cols=rows).T

    @classmethod
    def identity(cls, n: int) -> "Mat":
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls._raw(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        vals = [to_rational(v) for v in values]
        return cls._raw(
            n, n, tuple(vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n))
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.cols)]

    @property
    def T(self) -> "Mat":
        return Mat._raw(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def select_columns(self, idx: Sequence[int]) -> "Mat":
        c = self.cols
        return Mat._raw(
            self.rows,
            len(idx),
            tuple(self.entries[i * c + j] for i in range(self.rows) for j in idx),
        )

    def select_rows(self, idx: Sequence[int]) -> "Mat":
        return Mat._raw(len(idx), self.cols, tuple(e for i in idx for e in self.row(i)))

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        return Mat.from_rows(
            [self.row(i) + other.row(i) for i in range(self.rows)], self.cols + other.cols
        )

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise NotSquare("trace of a non-square matrix")
        return sum((self.entries[i * self.cols + i] for i in range(self.rows)), Fraction(0))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def scale(self, alpha) -> "Mat":
        alpha = to_rational(alpha)
        return Mat._raw(self.rows, self.cols, tuple(alpha * e for e in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Mat._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Mat._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        return Mat._raw(self.rows, self.cols, tuple(-e for e in self.entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rows, self.cols, self.entries)))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(e) for e in self.row(i)) + "]" for i in range(self.rows))
        return f"Mat([{body}])"

    def to_json(self) -> list[list[str]]:
        return [[rational_str(e) for e in self.row(i)] for i in range(self.rows)]


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        nz = [(k, x) for k, x in enumerate(r) if x]
        for c in bcols:
            s = Fraction(0)
            for k, x in nz:
                y = c[k]
                if y:
                    s += x * y
            out.append(s)
    return Mat._raw(a.rows, b.cols, tuple(out))


def _gauss_jordan(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """Reduce ``rows`` in place to reduced row echelon form over the first
    ``ncols`` columns; returns the pivot columns.

    Pivot choice is the first nonzero entry at or below the current row.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def invert(a: Mat) -> Mat:
    """Exact inverse by Gauss-Jordan elimination on ``[a | I]``."""
    if not a.is_square():
        raise NotSquare(f"cannot invert a {a.rows}x{a.cols} matrix")
    n = a.rows
    one, zero = Fraction(1), Fraction(0)
    aug = [list(a.row(i)) + [one if i == j else zero for j in range(n)] for i in range(n)]
    pivots = _gauss_jordan(aug, n)
    if len(pivots) < n:
        raise Singular("matrix is singular")
    return Mat._raw(n, n, tuple(x for r in aug for x in r[n:]))


def solve(a: Mat, b: Mat) -> Mat:
    """Solve ``a x = b`` for square nonsingular ``a``."""
    if not a.is_square():
        raise NotSquare("solve needs a square system")
    if b.rows != a.rows:
        raise DimensionMismatch("right-hand side has the wrong row count")
    n = a.rows
    aug = [list(a.row(i)) + list(b.row(i)) for i in range(n)]
    if len(_gauss_jordan(aug, n)) < n:
        raise Singular("matrix is singular")
    return Mat._raw(n, b.cols, tuple(x for r in aug for x in r[n:]))


def _integer_rows(a: Mat) -> list[list[int]]:
    # clear denominators row by row; rank and determinant up to sign/scale survive
    out = []
    for i in range(a.rows):
        r = a.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def rank(a: Mat) -> int:
    """Rank by fraction-free (Bareiss) elimination on the integer-scaled rows."""
    m = _integer_rows(a)
    nrows, ncols = a.rows, a.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            f = m[i][c]
            m[i] = [(piv * x - f * y) // prev for x, y in zip(m[i], m[r])]
        prev = piv
        r += 1
    return r


def determinant(a: Mat) -> Fraction:
    """Exact determinant via Bareiss fraction-free elimination."""
    if not a.is_square():
        raise NotSquare(f"determinant of a {a.rows}x{a.cols} matrix")
    n = a.rows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for i in range(n):
        r = a.row(i)
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        scale /= den
        m.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k]), None)
            if p is None:
                return Fraction(0)
            m[k], m[p] = m[p], m[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (piv * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = piv
    return sign * m[n - 1][n - 1] * scale


def right_pseudoinverse(v: Mat) -> Mat:
    """Return ``V^T (V V^T)^{-1}`` for a full-row-rank ``V``.

    This is the Moore-Penrose pseudoinverse in the full-row-rank case, so
    ``V @ pinv == I_n`` exactly.
    """
    try:
        q_inv = invert(v @ v.T)
    except Singular:
        raise RankDeficient(f"{v.rows}x{v.cols} matrix does not have full row rank") from None
    return v.T @ q_inv


def is_signed_permutation(g: Mat) -> bool:
    if not g.is_square():
        return False
    n = g.rows
    col_hits = [0] * n
    for i in range(n):
        hits = 0
        for j, x in enumerate(g.row(i)):
            if x:
                if x != 1 and x != -1:
                    return False
                hits += 1
                col_hits[j] += 1
        if hits != 1:
            return False
    return all(h == 1 for h in col_hits)


def decompose_signed_permutation(g: Mat):
    """Split a signed permutation matrix into ``(signs, perm)`` with ``g = D P``.

    ``signs[i]`` is the diagonal of ``D``; ``perm`` is a
    :class:`~polyident.permgroup.Permutation` whose matrix is ``P``
    (``P[perm[j], j] == 1``).
    """
    from .permgroup import Permutation

    if not is_signed_permutation(g):
        raise NotSignedPermutation(f"{g!r} is not a signed permutation matrix")
    n = g.rows
    signs = [0] * n
    image = [0] * n
    for i in range(n):
        for j, x in enumerate(g.row(i)):
            if x:
                signs[i] = int(x)
                image[j] = i
    return tuple(signs), Permutation(image)

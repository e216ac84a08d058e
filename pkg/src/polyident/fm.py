"""Exact Fourier-Motzkin feasibility for small rational systems."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

__all__ = ["feasible"]


def _normalize(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[tuple[int, ...], int]:
    # scale by a positive factor to coprime integers; the inequality is unchanged
    den = rhs.denominator
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    r = int(rhs * den)
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = gcd(g, r)
    if g > 1:
        ints = [x // g for x in ints]
        r //= g
    return tuple(ints), r


def _eliminate_equalities(ineqs, eqs, nvars):
    """Substitute away one variable per independent equality.

    Returns the transformed inequality list over the remaining variables, or
    None if the equalities are inconsistent.
    """
    ineqs = [(list(a), b) for a, b in ineqs]
    eqs = [(list(a), b) for a, b in eqs]
    alive = list(range(nvars))
    while eqs:
        a, b = eqs.pop()
        k = next((j for j, x in enumerate(a) if x), None)
        if k is None:
            if b != 0:
                return None, None
            continue
        piv = a[k]
        # x_k = (b - sum_{j != k} a_j x_j) / piv
        def sub(row, rhs):
            f = row[k]
            if not f:
                return row, rhs
            t = f / piv
            row = [x - t * y for x, y in zip(row, a)]
            return row, rhs - t * b
        eqs = [sub(r, s) for r, s in eqs]
        ineqs = [sub(r, s) for r, s in ineqs]
        alive.remove(k)
    ineqs = [([r[j] for j in alive], s) for r, s in ineqs]
    return ineqs, len(alive)


def feasible(
    ineqs: Sequence[tuple[Sequence, object]],
    eqs: Sequence[tuple[Sequence, object]] = (),
    nvars: int | None = None,
) -> bool:
    """Decide whether ``{x : a.x <= b for (a, b) in ineqs, a.x == b for eqs}``
    is nonempty, exactly.

    Equalities are substituted first; the remaining inequalities are reduced
    by Fourier-Motzkin with Chernikov's history rule and duplicate removal,
    which keeps the row count manageable for the desk-scale systems used here.
    """
    if nvars is None:
        rows = list(ineqs) or list(eqs)
        nvars = len(rows[0][0]) if rows else 0
    ineqs = [([Fraction(x) for x in a], Fraction(b)) for a, b in ineqs]
    eqs = [([Fraction(x) for x in a], Fraction(b)) for a, b in eqs]
    ineqs, nvars = _eliminate_equalities(ineqs, eqs, nvars)
    if ineqs is None:
        return False

    # rows: normalized (coeffs, rhs) -> history (frozenset of source rows)
    rows: dict[tuple[tuple[int, ...], int], frozenset] = {}
    for idx, (a, b) in enumerate(ineqs):
        key = _normalize(a, b)
        if not any(key[0]):
            if key[1] < 0:
                return False
            continue
        rows.setdefault(key, frozenset((idx,)))

    remaining = list(range(nvars))
    eliminated = 0
    while remaining:
        # cheapest variable first: fewest new rows
        def cost(j):
            pos = sum(1 for k in rows if k[0][j] > 0)
            neg = sum(1 for k in rows if k[0][j] < 0)
            return (pos * neg - pos - neg, j)

        j = min(remaining, key=cost)
        remaining.remove(j)
        eliminated += 1
        pos, neg, new = [], [], {}
        for key, hist in rows.items():
            c = key[0][j]
            if c > 0:
                pos.append((key, hist))
            elif c < 0:
                neg.append((key, hist))
            else:
                new[key] = hist
        for (pa, pb), ph in pos:
            cp = pa[j]
            for (na, nb), nh in neg:
                hist = ph | nh
                if len(hist) > eliminated + 1:
                    continue
                cn = -na[j]
                coeffs = [cn * x + cp * y for x, y in zip(pa, na)]
                rhs = cn * pb + cp * nb
                g = 0
                for x in coeffs:
                    g = gcd(g, x)
                g = gcd(g, rhs)
                if g > 1:
                    coeffs = [x // g for x in coeffs]
                    rhs //= g
                if not any(coeffs):
                    if rhs < 0:
                        return False
                    continue
                key = (tuple(coeffs), rhs)
                old = new.get(key)
                if old is None or len(hist) < len(old):
                    new[key] = hist
        rows = new
    return True

"""Shared polytopes for the test suite."""

import functools
import itertools
import random

from polyident.experiments import random_polytope
from polyident.polytope import Polytope, validate_polytope


def l1_ball(n=3):
    verts = []
    for i in range(n):
        for s in (1, -1):
            v = [0] * n
            v[i] = s
            verts.append(v)
    return Polytope.from_vertices(verts, label=f"l1-ball-{n}")


def cube(n):
    return Polytope.from_vertices([list(v) for v in itertools.product((-1, 1), repeat=n)], label=f"cube-{n}")


def triangle():
    return Polytope.from_vertices([[1, 0], [0, 1], [-1, -1]], label="triangle")


def simplex(n):
    """Standard simplex conv{0, e_1, ..., e_n}."""
    verts = [[0] * n]
    for i in range(n):
        v = [0] * n
        v[i] = 1
        verts.append(v)
    return Polytope.from_vertices(verts, label=f"simplex-{n}")


def fixtures():
    return [l1_ball(3), cube(2), cube(3), triangle(), simplex(2), simplex(3), l1_ball(2)]


@functools.lru_cache(maxsize=None)
def random_corpus(count=60, seed=11, dims=(3, 4, 5), max_m=9):
    """Seeded random polytopes with at most ``max_m`` vertices."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        dim = rng.choice(dims)
        sub = rng.getrandbits(63)
        p = random_polytope(dim, sub, label=f"r{dim}-{sub}")
        if p.num_vertices <= max_m and validate_polytope(p).ok:
            out.append(p)
    return tuple(out)


def corpus():
    return fixtures() + list(random_corpus())

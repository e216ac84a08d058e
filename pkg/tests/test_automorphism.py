import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyident.automorphism import (
    GeneratorSet,
    OrderedPartition,
    SearchBudgetExceeded,
    TooLarge,
    automorphism_generators,
    brute_force_automorphisms,
    expand_group,
    refine_partition,
    sift_generators,
)
from polyident.coloring import ColoredGraph, build_colored_graph, coloring_matrix
from polyident.permgroup import Permutation
from polyident.polytope import Polytope

from corpus import corpus, cube, l1_ball, triangle


def graph_of(p):
    return build_colored_graph(coloring_matrix(p))


def l1_standard():
    # V = [I -I]: vertex i and i + 3 are antipodal
    return Polytope.from_vertices([[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]])


def distinct_nodes(m):
    return ColoredGraph.from_colors(list(range(m)), [[100] * m for _ in range(m)])


def test_partition_validation():
    with pytest.raises(ValueError):
        OrderedPartition(((0, 1), (1, 2)))
    assert OrderedPartition.unit(3).cells == ((0, 1, 2),)
    assert OrderedPartition.unit(3).individualize(1).cells == ((1,), (0, 2))


def test_refine_single_color_keeps_unit():
    g = graph_of(triangle())
    assert refine_partition(g, OrderedPartition.unit(3)) == OrderedPartition.unit(3)


def test_refine_distinct_colors_discrete():
    g = distinct_nodes(5)
    assert refine_partition(g, OrderedPartition.unit(5)).is_discrete()


def test_refine_l1_individualized():
    g = graph_of(l1_standard())
    p = refine_partition(g, OrderedPartition.unit(6).individualize(0))
    assert p.cells[0] == (0,)
    assert (3,) in p.cells
    assert (1, 2, 4, 5) in p.cells


def test_refine_is_equitable_on_corpus():
    for p in corpus()[:20]:
        g = graph_of(p)
        cells = refine_partition(g, OrderedPartition.unit(g.m)).cells
        cell_of = {x: k for k, c in enumerate(cells) for x in c}
        for c in cells:
            sigs = {
                (g.node_color[v], tuple(sorted((g.edge_color[v][u], cell_of[u]) for u in range(g.m) if u != v)))
                for v in c
            }
            assert len(sigs) == 1


def test_triangle_generators():
    gens = automorphism_generators(graph_of(triangle()))
    assert len(expand_group(gens)) == 6


def test_l1_ball_group():
    g = graph_of(l1_standard())
    gens = automorphism_generators(g)
    group = expand_group(gens)
    assert len(group) == 48
    assert set(group) == set(brute_force_automorphisms(g))


def test_trivial_group():
    gens = automorphism_generators(distinct_nodes(4))
    assert len(gens) == 0
    assert expand_group(gens) == [Permutation.identity(4)]
    assert brute_force_automorphisms(distinct_nodes(4)) == [Permutation.identity(4)]


def test_brute_force_triangle_all():
    assert len(brute_force_automorphisms(graph_of(triangle()))) == 6


def test_brute_force_cap():
    with pytest.raises(TooLarge):
        brute_force_automorphisms(graph_of(cube(4)), cap=10)


def test_budget():
    with pytest.raises(SearchBudgetExceeded):
        automorphism_generators(graph_of(cube(3)), budget=2)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("POLYIDENT_SEARCH_BUDGET", "2")
    with pytest.raises(SearchBudgetExceeded):
        automorphism_generators(graph_of(cube(3)))


def test_sift_redundant_s3():
    everything = [Permutation(p) for p in itertools.permutations(range(3))][1:]
    out = sift_generators(GeneratorSet(tuple(everything), 3))
    assert len(out) <= 2
    assert len(expand_group(out)) == 6


def test_sift_small_cases():
    assert len(sift_generators(GeneratorSet((), 4))) == 0
    g = Permutation.from_cycles(4, (0, 1))
    assert sift_generators(GeneratorSet((g,), 4)).generators == (g,)
    assert len(sift_generators(GeneratorSet((Permutation.identity(4),), 4))) == 0


@pytest.mark.parametrize("p", corpus(), ids=lambda p: p.label)
def test_generators_match_brute_force(p):
    g = graph_of(p)
    gens = automorphism_generators(g)
    assert all(g.preserves(x.image) for x in gens)
    assert len(gens) <= g.m - 1
    sifted = sift_generators(gens)
    assert len(sifted) <= g.m - 1
    if g.m <= 8:
        full = set(brute_force_automorphisms(g))
        assert set(expand_group(gens, m=g.m)) == full
        assert set(expand_group(sifted, m=g.m)) == full


@given(st.permutations(range(6)), st.integers(0, 2**32))
def test_relabeled_graph_same_group_order(image, seed):
    # a random 3-colored graph and its relabeling have groups of equal order
    rng = random.Random(seed)
    m = 6
    ec = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            ec[i][j] = ec[j][i] = rng.randrange(3)
    nc = [rng.randrange(2) for _ in range(m)]
    g = ColoredGraph.from_colors(nc, ec)
    inv = [0] * m
    for i, x in enumerate(image):
        inv[x] = i
    h = ColoredGraph.from_colors([nc[inv[i]] for i in range(m)], [[ec[inv[i]][inv[j]] for j in range(m)] for i in range(m)])
    a = expand_group(automorphism_generators(g), m=m)
    b = expand_group(automorphism_generators(h), m=m)
    assert len(a) == len(b) == len(brute_force_automorphisms(g))

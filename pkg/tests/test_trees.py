import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_strata
from stablegw.errors import ResourceError, ValidationError
from stablegw.trees import (LabelledTree, WeightedTree, canonical_form, collapses_onto,
                            enumerate_stable_trees, ghost_forest, is_stable, isomorphic, moduli_dim,
                            random_tree, reduced_index_set, single_vertex, solve_edge_system, stabilize,
                            strata_counts, stratum_dim, tangency_moduli_dim, weighted_stable)


def chain(*label_sets):
    verts = list(range(len(label_sets)))
    edges = [(i, i + 1) for i in verts[:-1]]
    return LabelledTree(verts, edges, {i: v for v, ls in enumerate(label_sets) for i in ls})


def test_malformed_trees_rejected():
    with pytest.raises(ValidationError):
        LabelledTree([0, 1, 2], [(0, 1), (1, 2), (0, 2)], {})
    with pytest.raises(ValidationError):
        LabelledTree([0, 1, 2], [(0, 1)], {})
    with pytest.raises(ValidationError):
        LabelledTree([0], [(0, 0)], {})
    with pytest.raises(ValidationError):
        LabelledTree([0], [], {1: 5})


def test_is_stable_examples():
    assert is_stable(single_vertex([1, 2, 3]))
    for t in (single_vertex([1, 2]), chain({1}, {2}), chain({1, 2}, set()), chain({1}, set(), {2})):
        assert not is_stable(t)
    assert not is_stable(chain({1, 2}, {3}))
    assert is_stable(chain({1, 2}, {3, 4}))


def test_stabilize_examples():
    t = chain({1, 2}, {3, 4})
    s, tau = stabilize(t)
    assert s == t and tau.collapsed == ()

    s, tau = stabilize(chain({1, 2}, {3}))
    assert s.vertices == (0,) and s.labels == {1: 0, 2: 0, 3: 0}
    assert tau(1) == 0 and tau.collapsed == (1,)

    s, tau = stabilize(chain({1, 2}, set(), {3, 4}))
    assert s.edges == ((0, 2),)
    assert s.labels == {1: 0, 2: 0, 3: 2, 4: 2}
    assert tau.collapsed == (1,)

    with pytest.raises(ValidationError):
        stabilize(chain({1}, {2}))


@given(st.integers(0, 10 ** 6), st.integers(1, 9), st.integers(3, 7))
def test_stabilize_properties(seed, nv, k):
    t = random_tree(np.random.default_rng(seed), nv, k)
    s, tau = stabilize(t)
    assert is_stable(s)
    assert stabilize(s)[0] == s
    assert set(s.labels) == set(t.labels)
    assert {tau(v) for v in t.vertices} == set(s.vertices)
    for i, v in t.labels.items():
        assert tau(v) == s.labels[i]
    assert s.edge_count <= t.edge_count


def test_ghost_forest_and_reduced_set():
    t = chain({1}, {2}, {3, 5}, {4})
    w = WeightedTree(t, {0: (1,), 1: (0,), 2: (0,), 3: (2,)})
    assert ghost_forest(w) == [(1, 2)]
    assert reduced_index_set(w) == (1, 4, 5)

    nz = WeightedTree(t, {v: (1,) for v in t.vertices})
    assert ghost_forest(nz) == []
    assert reduced_index_set(nz) == (1, 2, 3, 4, 5)

    one = WeightedTree(single_vertex([1, 2, 3]), {0: (0,)})
    assert ghost_forest(one) == [(0,)]
    assert reduced_index_set(one) == (3,)

    bare = WeightedTree(chain({1}, set(), {2}), {0: (1,), 1: (0,), 2: (1,)})
    assert ghost_forest(bare) == [(1,)]
    assert reduced_index_set(bare) == (1, 2)


def test_weighted_stability_is_weaker():
    t = chain({1}, {2})
    assert not is_stable(t)
    assert weighted_stable(WeightedTree(t, {0: (1,), 1: (1,)}))
    assert not weighted_stable(WeightedTree(t, {0: (0,), 1: (1,)}))
    with pytest.raises(ValidationError):
        WeightedTree(t, {0: (1,), 1: (-1,)}, omega_row=(1,))


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_enumeration_matches_bruteforce(k):
    assert strata_counts(k) == brute_force_strata(k)
    trees = enumerate_stable_trees(k)
    forms = [canonical_form(t) for t in trees]
    assert len(set(forms)) == len(forms)
    assert all(is_stable(t) for t in trees)


def test_enumeration_frozen_counts():
    assert strata_counts(4) == {0: 1, 1: 3}
    assert strata_counts(5) == {0: 1, 1: 10, 2: 15}
    assert strata_counts(3) == {0: 1}
    assert len(enumerate_stable_trees(5, max_edges=1)) == 11
    with pytest.raises(ResourceError):
        enumerate_stable_trees(9)
    with pytest.raises(ValidationError):
        enumerate_stable_trees(2)


def test_canonical_form_ignores_vertex_ids():
    a = LabelledTree([0, 1], [(0, 1)], {1: 0, 2: 0, 3: 1, 4: 1})
    b = LabelledTree([7, 3], [(3, 7)], {1: 3, 2: 3, 3: 7, 4: 7})
    c = LabelledTree([0, 1], [(0, 1)], {1: 0, 3: 0, 2: 1, 4: 1})
    assert isomorphic(a, b)
    assert not isomorphic(a, c)


def test_stratum_dims():
    assert stratum_dim(single_vertex(range(1, 6))) == 2
    assert stratum_dim(single_vertex([1, 2, 3])) == 0
    point_strata = [t for t in enumerate_stable_trees(5) if t.edge_count == 2]
    assert len(point_strata) == 15 and all(stratum_dim(t) == 0 for t in point_strata)
    for k in range(3, 7):
        for t in enumerate_stable_trees(k):
            assert stratum_dim(t) >= 0
            assert stratum_dim(t) + t.edge_count == k - 3
    with pytest.raises(ValidationError):
        stratum_dim(chain({1, 2}, {3}))


def test_closure_order_antisymmetric():
    trees = enumerate_stable_trees(5)
    for a, b in itertools.product(trees, repeat=2):
        if collapses_onto(a, b) and collapses_onto(b, a):
            assert isomorphic(a, b)
    top = single_vertex(range(1, 6))
    assert all(collapses_onto(t, top) for t in trees)


def test_dimension_formulas():
    assert moduli_dim(3, 1, 5, 0) == 12
    assert moduli_dim(3, 1, 5, 1) == moduli_dim(3, 1, 5, 0) - 2
    n, k, c1 = 4, 3, 2
    ell = 5
    assert moduli_dim(n, k + ell, c1, 0, 2 * ell) == 2 * (n - 3 + k + c1)
    assert tangency_moduli_dim(3, 2, 1) == 2 * 3 - 6 + 4 + 2
    assert tangency_moduli_dim(3, 2, 1, [(1, 0)]) == tangency_moduli_dim(3, 2, 1) - 2
    assert tangency_moduli_dim(3, 2, 1, [(1, 1)]) == tangency_moduli_dim(3, 2, 1) - 4
    assert tangency_moduli_dim(3, 2, 1, [(2, -1)]) == tangency_moduli_dim(3, 2, 1)
    with pytest.raises(ValidationError):
        tangency_moduli_dim(3, 2, 1, [(1, -2)])


def test_edge_system_exact():
    t = single_vertex([1])
    xi, eta = solve_edge_system(t, {}, (Fraction(2),))
    assert xi == {0: (Fraction(2),)} and eta == {}

    t = LabelledTree([0, 1], [(0, 1)], {1: 0})
    p, q, r = (Fraction(3), Fraction(1, 2)), (Fraction(-1), Fraction(5)), (Fraction(1, 3), Fraction(0))
    xi, eta = solve_edge_system(t, {(0, 1): p, (1, 0): q}, r)
    assert eta[(0, 1)] == tuple(a - b for a, b in zip(p, r))
    assert xi[1] == tuple(c - a + b for a, b, c in zip(p, r, q))


@given(st.integers(0, 10 ** 6), st.integers(1, 20), st.integers(1, 3))
def test_edge_system_residual_zero(seed, nv, dim):
    rng = np.random.default_rng(seed)
    t = random_tree(rng, nv, 2)

    def vec():
        return tuple(Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, dim), rng.integers(1, 7, dim)))
    v = {}
    for a, b in t.edges:
        v[(a, b)], v[(b, a)] = vec(), vec()
    root = vec()
    xi, eta = solve_edge_system(t, v, root)
    assert xi[t.labels[1]] == root
    for (a, b), val in v.items():
        e = eta[(min(a, b), max(a, b))]
        assert tuple(x + y for x, y in zip(xi[a], e)) == val
    # uniqueness: shifting the root value shifts the solution, never leaves it fixed
    shifted = tuple(x + 1 for x in root)
    xi2, _ = solve_edge_system(t, v, shifted)
    assert xi2[t.labels[1]] != xi[t.labels[1]]


def test_tree_json_roundtrip():
    t = chain({1, 2}, {3}, {4, 5})
    assert LabelledTree.from_json(t.to_json()) == t
    with pytest.raises(ValidationError):
        LabelledTree.from_json({"vertices": [0], "edges": [], "labels": {"1": 0}, "k": 2})

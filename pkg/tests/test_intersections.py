import math
import time
import warnings
from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from oracles import roots_inside, winding_by_quadrature
from stablegw import intersections as its
from stablegw.errors import ValidationError
from stablegw.projective import QQi
from stablegw.trees import LabelledTree


def expand(roots, lead=1):
    """Ascending coefficients of lead * prod (z - r), exact."""
    p = [QQi(lead)]
    for r in roots:
        r = QQi(*r) if isinstance(r, tuple) else QQi(r)
        q = [QQi(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            q[i + 1] = q[i + 1] + c
            q[i] = q[i] - c * r
        p = q
    return p


def test_vanishing_order():
    assert its.vanishing_order([0, 0, 0, 1]) == 3
    cubic = [0, 0, -1, 1]  # z^2 (z - 1)
    assert its.vanishing_order(cubic, 1) == 1
    assert its.vanishing_order(cubic, 0) == 2
    assert its.vanishing_order([5]) == 0
    assert its.vanishing_order(["1/2", 0, 0]) == 0
    assert its.vanishing_order([0.0, 0.0, 2.5 + 1j]) == 2
    assert its.vanishing_order(expand([(1, 1)] * 3 + [2]), [1, 1]) == 3
    for zero in ([], [0, 0]):
        with pytest.raises(ValidationError):
            its.vanishing_order(zero)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 5),
       st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), max_size=4))
def test_vanishing_order_of_factored(a, b, m, others):
    others = [r for r in others if r != (a, b)]
    p = expand([(a, b)] * m + others, lead=F(3, 2))
    assert its.vanishing_order(p, [a, b]) == m


def test_winding_matches_order():
    assert its.local_intersection_winding([0, 0, 0, 1], 0, 0.5).value == 3
    assert its.local_intersection_winding([0, 0, -1, 1], 0, 0.5).value == 2
    assert its.local_intersection_winding(lambda z: np.exp(z) - 1, 0, 1.0).value == 1
    with pytest.raises(ValidationError):
        its.local_intersection_winding([-1, 0, 1], 0, 1.0)
    with pytest.raises(ValidationError):
        its.local_intersection_winding([0, 1], 0, -1.0)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        k = int(rng.integers(1, 5))
        roots = [(int(rng.integers(-3, 4)), int(rng.integers(-3, 4))) for _ in range(k)]
        mults = [int(rng.integers(1, 4)) for _ in range(k)]
        p = expand([r for r, m in zip(roots, mults) for _ in range(m)], lead=int(rng.integers(1, 4)))
        z0 = complex(*roots[0])
        gaps = [abs(complex(*r) - z0) for r in roots if r != roots[0]]
        radius = 0.5 * min(gaps, default=2.0)
        w = its.local_intersection_winding(p, roots[0], radius)
        order = its.vanishing_order(p, [roots[0][0], roots[0][1]])
        assert w.value == order >= 1
        assert order == roots_inside(p, z0, radius)
        assert winding_by_quadrature(p, z0, radius) == pytest.approx(order, abs=1e-6)


def conic():
    return [[1], [0, 1], [0, 0, 1]]  # [1 : z : z^2]


def test_total_intersection_bezout():
    line = its.Hypersurface({(0, 1, 0): 1, (1, 0, 0): -2}, 3)
    cert = its.total_intersection(conic(), line)
    assert cert.total == cert.expected == 2
    tangent = its.Hypersurface({(0, 0, 1): 1}, 3)  # meets the conic only at z = 0, doubly
    cert = its.total_intersection(conic(), tangent)
    assert cert.total == 2 and cert.points == [{"point": [0.0, 0.0], "multiplicity": 2}]
    # nodal cubic [1 : z^2 - 1 : z^3 - z]; the line x1 = 0 passes through the node (z = +-1)
    cubic = [[1], [-1, 0, 1], [0, -1, 0, 1]]
    cert = its.total_intersection(cubic, its.Hypersurface({(0, 1, 0): 1}, 3))
    assert cert.total == cert.expected == 3
    assert sorted(q["multiplicity"] for q in cert.points) == [1, 1, 1]
    # a common factor is a base point and lowers the degree
    cert = its.total_intersection([[-1, 1], [0, -1, 1], [1, -1]], line)
    assert cert.map_degree == 1 and cert.base_point_degree == 1 and cert.total == 1
    with pytest.raises(ValidationError):
        its.total_intersection([[0, 1], [0, 1], [1]], its.Hypersurface({(1, 0, 0): 1, (0, 1, 0): -1}, 3))
    with pytest.raises(ValidationError):
        its.total_intersection(conic(), its.Hypersurface({(1, 0, 0): 1, (0, 2, 0): 1}, 3))


def _random_hypersurface(rng, nvars, D):
    terms = {}
    for _ in range(4):
        cut = sorted(int(x) for x in rng.integers(0, D + 1, size=nvars - 1))
        e = tuple(b - a for a, b in zip([0] + cut, cut + [D]))
        terms[e] = int(rng.integers(1, 5)) * int(rng.choice([-1, 1]))
    return its.Hypersurface(terms, nvars)


def test_total_intersection_random_maps():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    checked = 0
    while checked < 200:
        d, D, n = int(rng.integers(1, 6)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        comps = [[int(x) for x in rng.integers(-3, 4, size=d + 1)] for _ in range(n + 1)]
        comps[0][-1] = int(rng.integers(1, 4))
        Y = _random_hypersurface(rng, n + 1, D)
        try:
            cert = its.total_intersection(comps, Y)
        except ValidationError:
            continue
        if cert.base_point_degree:
            continue
        checked += 1
        assert cert.total == cert.expected == d * D
        assert sum(q["multiplicity"] for q in cert.points) == d * D
    assert time.perf_counter() - start < 60


def test_normal_jet_fixtures():
    jet = its.normal_jet([[0, 1], [0, 0, 1]], 1, 1)
    assert jet.defined and jet.value == [QQi(0)]
    jet = its.normal_jet([[0, 1], [0, 0, 1]], 1, 2)
    assert jet.defined and jet.value == [QQi(2)]
    assert jet.tangency_order == 1 and jet.local_index == 2
    flat = its.normal_jet([[0, 1], [0]], 1, 3)
    assert flat.contained and flat.defined and flat.tangency_order is None
    assert not its.normal_jet([[0, 1], [0, 0, 1]], 1, 3).defined
    with pytest.raises(ValidationError):
        its.normal_jet([[0, 1], [1, 1]], 1, 1)
    Y = its.Hypersurface.coordinate(3)
    for ell in range(0, 6):
        f = [[0, 1], [0, 2, 1], [0] * (ell + 1) + [1, 3]]
        jet = its.normal_jet(f, 2, 1)
        h = its.pullback(Y, f)
        assert jet.tangency_order == ell and jet.local_index == ell + 1
        assert its.vanishing_order(h, 0) == ell + 1
        assert its.local_intersection_winding(h, 0, 0.2).value == ell + 1
        top = its.normal_jet(f, 2, ell + 1)
        assert top.defined and top.value == [QQi(math.factorial(ell + 1))]


def _random_curve(rng, n, k, ell, order):
    comps = []
    for j in range(n):
        start = 1 if j < k else ell
        comps.append([0.0] * start + [complex(*rng.normal(size=2)) for _ in range(order + 1 - start)])
    return comps


def test_jet_law():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 4))
        k = int(rng.integers(1, n))
        ell = int(rng.integers(1, 5))
        phi = its.random_adapted_diffeo(n, k, rng)
        worst = max(worst, its.jet_law_residual(_random_curve(rng, n, k, ell, ell), phi, k, ell))
    assert worst < 1e-8
    with pytest.raises(ValidationError):
        its.jet_law_residual([[0, 1], [0, 1, 1]], its.random_adapted_diffeo(2, 1, rng), 1, 2)


def test_jet_law_symbolic_oracle():
    """Compose with sympy and differentiate directly."""
    rng = np.random.default_rng(3)
    s = sympy.Symbol("s", real=True)
    for _ in range(8):
        n, k, ell = 2, 1, int(rng.integers(1, 4))
        phi = its.random_adapted_diffeo(n, k, rng, terms=3)
        f = _random_curve(rng, n, k, ell, ell)
        real = its.complex_to_real_series(f, ell)
        xs = [sum(sympy.Float(c) * s ** i for i, c in enumerate(row)) for row in real]
        comp = [sum(sympy.Float(c) * sympy.Mul(*[x ** p for x, p in zip(xs, e)]) for e, c in terms.items())
                for terms in phi.terms]
        lhs = np.array([float(sympy.diff(c, s, ell).subs(s, 0)) for c in comp])
        rhs = phi.linear_part() @ real[:, ell] * math.factorial(ell)
        assert np.allclose(lhs[2 * k:], rhs[2 * k:], atol=1e-9)
        assert its.jet_law_residual(f, phi, k, ell) < 1e-9


def _nodal(components, labels, edges, nodes, marks):
    tree = LabelledTree(sorted(components), edges, labels)
    return its.NodalPolynomialMap(tree, components, nodes, marks)


def test_ghost_tree_local_index():
    Y = its.Hypersurface.coordinate(2)
    F_ = _nodal(
        {0: [[0], [0]], 1: [[0, 1], [0, 0, 1]], 2: [[0, 1, 1], [0, 0, 0, 1, 1]]},
        {1: 0, 2: 1, 3: 2}, [(0, 1), (0, 2)],
        {(0, 1): 0, (1, 0): 0, (0, 2): 0, (2, 0): 0}, {1: 0, 2: 1, 3: 0})
    assert F_.ghost_tree(0) == {0}
    assert its.nodal_local_index(F_, Y, 1) == 2 + 3
    assert its.nodal_local_index(F_, Y, 2) == 0
    assert its.nodal_local_index(F_, Y, 3) == 3
    # a larger ghost tree adds the contributions of all its nonconstant neighbours
    G = _nodal(
        {0: [[0], [0]], 1: [[0], [0]], 2: [[0, 1], [0, 0, 1]], 3: [[0, 1], [0, 1]], 4: [[0, 1], [0, 0, 0, 0, 1]]},
        {1: 0, 2: 2, 3: 3, 4: 4}, [(0, 1), (0, 2), (1, 3), (1, 4)],
        {(0, 1): 1, (1, 0): 2, (0, 2): 0, (2, 0): 0, (1, 3): 0, (3, 1): 0, (1, 4): 0, (4, 1): 0},
        {1: 0, 2: 1, 3: 1, 4: 1})
    assert G.ghost_tree(0) == {0, 1}
    assert its.nodal_local_index(G, Y, 1) == 2 + 1 + 4
    lone = _nodal({0: [[0], [0]]}, {1: 0, 2: 0, 3: 0}, [], {}, {1: 0, 2: 0, 3: 0})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert its.nodal_local_index(lone, Y, 1) == 0
    assert caught
    inside = _nodal({0: [[0], [0]], 1: [[0, 1], [0]]}, {1: 0, 2: 0, 3: 1}, [(0, 1)],
                    {(0, 1): 0, (1, 0): 0}, {1: 0, 2: 0, 3: 0})
    with pytest.raises(ValidationError):
        its.nodal_local_index(inside, Y, 1)

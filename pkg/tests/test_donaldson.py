import itertools
import math
import time
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from stablegw import donaldson as don
from stablegw.errors import PropertyViolation, ValidationError

thetas = st.fractions(min_value=0, max_value=F(99, 100))
alphas = st.fractions(min_value=0, max_value=20, max_denominator=10)


def test_d_star():
    assert don.d_star(F(1, 2), 3) == 9
    assert don.d_star(0, F(7, 3)) == F(7, 3)
    assert don.d_star(0.1, 9) == 11
    assert isinstance(don.d_star("1/3", 1), F)
    grid = [don.d_star(F(k, 10), 5) for k in range(10)]
    assert all(a < b for a, b in zip(grid, grid[1:]))
    for bad in ((1, 3), (F(3, 2), 3), (F(1, 2), -1), (float("nan"), 1), (True, 1)):
        with pytest.raises(ValidationError):
            don.d_star(*bad)


@given(thetas, alphas)
def test_d_star_formula(t, a):
    assert don.d_star(t, a) == (1 + t) / (1 - t) * a


def test_degree_threshold():
    assert don.degree_threshold(3, F(1, 2), 3) == 24
    for n, k, a in itertools.product(range(1, 11), range(1, 10), range(11)):
        t = F(k, 10)
        ds = (1 + t) / (1 - t) * a
        th = don.degree_threshold(n, t, a)
        assert th == 2 * (ds + n)
        assert th - 2 * ds == 2 * n
        assert th > max(ds, ds + n - 4) and th > 2 * max(ds, ds + n - 2)
    with pytest.raises(ValidationError):
        don.degree_threshold(0, F(1, 2), 1)


def test_index_sphere_in_Y():
    s = don.index_sphere_in_Y(don.DonaldsonSpec(3, F(1, 2), 1, omegaA=1, c1A=5, D=10))
    assert s.index == -12 and s.negative
    fam = don.index_sphere_in_Y(don.DonaldsonSpec(3, F(1, 2), 1, omegaA=1, c1A=5, D=10, family_k=4))
    assert fam.family_index == -8
    with pytest.raises(ValidationError):
        don.DonaldsonSpec(3, F(1, 2), 1, omegaA=0, c1A=0, D=4)
    with pytest.raises(ValidationError):
        don.index_sphere_in_Y(don.DonaldsonSpec(3, F(1, 2), 1, omegaA=1, c1A=0))


@given(st.integers(1, 12), thetas, alphas, st.integers(1, 12), st.integers(-40, 200), st.integers(1, 200),
       st.integers(0, 12))
def test_sphere_index_negative_above_degree_condition(n, t, a, wA, c1, D, k):
    spec = don.DonaldsonSpec(n, t, a, omegaA=wA, c1A=c1, D=D, family_k=k)
    s = don.index_sphere_in_Y(spec)
    ds = (1 + t) / (1 - t) * a
    assert s.index == 2 * n - 8 + 2 * (c1 - D * wA)
    assert s.bound == 2 * n - 8 + 2 * (ds - D) * wA
    assert s.family_index == s.index + k
    if spec.admissible:
        assert s.index <= s.bound
        if D > max(ds, ds + n - 4):
            assert s.negative
        if 2 * D > max(2 * ds, 2 * ds + 2 * n - 8 + k):
            assert s.family_index < 0


def test_max_tangency_order():
    m = don.max_tangency_order(don.DonaldsonSpec(3, 0, 2, omegaA=1, c1A=5, D=10))
    assert m.max_order == 6
    # bound = D_* omega(A) + n - 2 = 3, so l = 6 sits exactly on the threshold
    edge = don.max_tangency_order(don.DonaldsonSpec(3, 0, 2, omegaA=1, c1A=2, D=6))
    assert edge.max_order_bound == 3 and edge.ell == 6 and not edge.three_points
    assert don.max_tangency_order(don.DonaldsonSpec(3, 0, 2, omegaA=1, c1A=2, D=7)).three_points
    for n, k, a, wA in itertools.product(range(1, 11), (1, 5, 9), range(0, 11, 2), range(1, 11, 3)):
        t = F(k, 10)
        D = math.ceil(don.degree_threshold(n, t, a))
        top = math.floor((1 + t) / (1 - t) * a * wA)
        for c1 in (top, top - 1, -3):
            assert don.max_tangency_order(don.DonaldsonSpec(n, t, a, omegaA=wA, c1A=c1, D=D)).three_points


def test_index_two_hypersurfaces():
    p = don.index_two_hypersurfaces(don.DonaldsonSpec(4, F(1, 2), 1, omegaA=1, c1A=3, D0=20, D1=20))
    assert p.index == 2 * 4 - 10 + 6 - 80 == -76
    assert p.negative and p.conclusive
    # D_* = 3 and n = 4, so D0 + D1 = 3 is the boundary case
    edge = don.index_two_hypersurfaces(don.DonaldsonSpec(4, F(1, 2), 1, omegaA=1, c1A=3, D0=1, D1=2))
    assert not edge.degree_condition and not edge.conclusive
    with pytest.raises(ValidationError):
        don.index_two_hypersurfaces(don.DonaldsonSpec(4, F(1, 2), 1, omegaA=1, c1A=3, D=5))


@given(st.integers(1, 12), thetas, alphas, st.integers(1, 12), st.integers(-40, 200), st.integers(0, 30),
       st.integers(0, 30))
def test_two_hypersurface_index_negative(n, t, a, wA, c1, x0, x1):
    ds = (1 + t) / (1 - t) * a
    th = math.ceil(2 * (ds + n))
    spec = don.DonaldsonSpec(n, t, a, omegaA=wA, c1A=c1, D0=th + x0, D1=th + x1)
    p = don.index_two_hypersurfaces(spec)
    assert p.index == 2 * n - 10 + 2 * c1 - 2 * (2 * th + x0 + x1) * wA
    assert p.degree_condition
    if c1 <= ds * wA:
        assert p.negative and p.conclusive


def test_ell_at_least_three():
    for n, k, a in itertools.product(range(1, 11), range(1, 10), range(1, 6)):
        t = F(k, 10)
        D = math.ceil(don.degree_threshold(n, t, a))
        assert D >= 2 * n + 2
        assert don.check_ell_at_least_three(n, t, a, D, 1) == D >= 4
    # alpha = 0 gives D* = 2n, below 2n+2; at n = 1 the product l is only 2
    assert don.check_ell_at_least_three(2, F(1, 2), 0, 4, 1) == 4
    with pytest.raises(PropertyViolation):
        don.check_ell_at_least_three(1, F(1, 2), 0, 2, 1)
    with pytest.raises(ValidationError):
        don.check_ell_at_least_three(2, F(1, 2), 1, 3, 1)


def _brute_classes(w, E, positive):
    out = []
    for A in itertools.product(range(-E, E + 1), repeat=len(w)):
        e = sum(x * y for x, y in zip(w, A))
        if (0 <= e <= E) if positive else (-E <= e <= E):
            out.append(A)
    return sorted(out)


def test_enumerate_bounded_classes():
    assert don.enumerate_bounded_classes([1], 3) == [(0,), (1,), (2,), (3,)]
    assert don.enumerate_bounded_classes([1], 3, positive=False) == [(a,) for a in range(-3, 4)]
    assert don.enumerate_bounded_classes([1, 2], 0) == [(0, 0)]
    assert don.enumerate_bounded_classes([], 5) == []
    with pytest.raises(ValidationError):
        don.enumerate_bounded_classes([1], -1)
    for w in ([1, 1], [2, -1], [1, 3, 1], [F(1, 2), 1]):
        for E in range(4):
            for pos in (True, False):
                got = don.enumerate_bounded_classes(w, E, positive=pos)
                assert sorted(got) == _brute_classes(w, E, pos)
                if not pos:
                    assert set(got) == {tuple(-x for x in A) for A in got}
    counts = [len(don.enumerate_bounded_classes([1, 1], E, positive=False)) for E in (4, 8, 16)]
    assert all(b / a < 4.5 for a, b in zip(counts, counts[1:]))
    assert all(c <= (2 * E + 1) ** 2 for c, E in zip(counts, (4, 8, 16)))


def test_gw_normalization():
    assert don.gw_normalization(3, 0) == (F(1, 6), 1)
    assert don.gw_normalization(0, 0) == (1, 1)
    assert don.gw_normalization(2, 3) == (F(1, 12), 6)
    for l0, l1 in itertools.product(range(8), repeat=2):
        w, cov = don.gw_normalization(l0, l1)
        assert w * cov == F(1, math.factorial(l0))
    with pytest.raises(ValidationError):
        don.gw_normalization(-1, 0)


def test_sweeps_have_no_counterexamples():
    t0 = time.perf_counter()
    rep = don.threshold_sweep()
    pair = don.pair_sweep()
    assert time.perf_counter() - t0 < 5
    assert rep.cases > 10000 and rep.counterexamples == []
    assert pair.cases > 5000 and pair.counterexamples == []


def test_verdict_is_exact():
    v = don.bounds_verdict(don.DonaldsonSpec(3, F(1, 2), 1, omegaA=1, c1A=3, D=12, D0=12, D1=12, family_k=2))
    assert v["d_star"] == "3" and v["d_threshold"] == "12"
    assert all(v["flags"].values())
    assert all(isinstance(x, (int, str)) for x in v["indices"].values())

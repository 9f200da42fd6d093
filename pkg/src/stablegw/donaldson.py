"""Degree, index and dimension arithmetic for Donaldson hypersurfaces.

Everything here is exact: inputs are converted to Fraction (floats through
their decimal string, so 0.1 becomes 1/10) and integer quantities stay
integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from functools import cached_property
from fractions import Fraction
from numbers import Rational

from .errors import PropertyViolation, ValidationError


def as_rational(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise ValidationError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValidationError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot read {x!r} as a rational") from exc
    raise ValidationError(f"cannot read {x!r} as a rational")


def as_integer(x, name: str) -> int:
    if type(x) is int:
        return x
    q = as_rational(x)
    if q.denominator != 1:
        raise ValidationError(f"{name} must be an integer, got {q}")
    return int(q)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def d_star(theta0, norm_alpha) -> Fraction:
    """Degree bound (1+theta0)/(1-theta0) * |alpha|."""
    t, a = as_rational(theta0), as_rational(norm_alpha)
    if not 0 <= t < 1:
        raise ValidationError("theta0 must lie in [0, 1)")
    if a < 0:
        raise ValidationError("norm of alpha must be non-negative")
    return (1 + t) / (1 - t) * a


def degree_threshold(n, theta0, norm_alpha) -> Fraction:
    """2(D_* + n); every D above it satisfies both tangency degree conditions."""
    n = as_integer(n, "n")
    if n < 1:
        raise ValidationError("n must be positive")
    ds = d_star(theta0, norm_alpha)
    th = 2 * (ds + n)
    if not (th > max(ds, ds + n - 4) and th > 2 * max(ds, ds + n - 2)):
        raise PropertyViolation(f"threshold {th} misses the tangency conditions")
    return th


@dataclass(frozen=True)
class DonaldsonSpec:
    n: int
    theta0: Fraction
    norm_alpha: Fraction
    omegaA: int
    c1A: int
    D: int | None = None
    D0: int | None = None
    D1: int | None = None
    family_k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n", as_integer(self.n, "n"))
        object.__setattr__(self, "theta0", as_rational(self.theta0))
        object.__setattr__(self, "norm_alpha", as_rational(self.norm_alpha))
        object.__setattr__(self, "omegaA", as_integer(self.omegaA, "omega(A)"))
        object.__setattr__(self, "c1A", as_integer(self.c1A, "c1(A)"))
        object.__setattr__(self, "family_k", as_integer(self.family_k, "family dimension"))
        for name in ("D", "D0", "D1"):
            v = getattr(self, name)
            if v is not None:
                v = as_integer(v, name)
                if v < 1:
                    raise ValidationError(f"{name} must be positive")
                object.__setattr__(self, name, v)
        if self.n < 1:
            raise ValidationError("n must be positive")
        if not 0 <= self.theta0 < 1:
            raise ValidationError("theta0 must lie in [0, 1)")
        if self.omegaA < 1:
            raise ValidationError("omega(A) must be at least 1 for a nonconstant class")
        if self.family_k < 0:
            raise ValidationError("family dimension must be non-negative")

    @cached_property
    def d_star(self) -> Fraction:
        return d_star(self.theta0, self.norm_alpha)

    @cached_property
    def threshold(self) -> Fraction:
        return degree_threshold(self.n, self.theta0, self.norm_alpha)

    @property
    def admissible(self) -> bool:
        """c1(A) <= D_* omega(A), the range in which the bounds apply."""
        return self.c1A <= self.d_star * self.omegaA

    def degree(self) -> int:
        if self.D is None:
            raise ValidationError("degree D not given")
        return self.D


@dataclass(frozen=True)
class SphereIndex:
    index: int
    bound: Fraction
    negative: bool
    degree_condition: bool
    family_index: int
    family_condition: bool

    def to_json(self):
        d = asdict(self)
        d["bound"] = str(self.bound)
        return d


def index_sphere_in_Y(spec: DonaldsonSpec) -> SphereIndex:
    """Index of a sphere in class A inside Y, with c1(TY) = c1(TX) - D[omega]."""
    D, n, wA, ds = spec.degree(), spec.n, spec.omegaA, spec.d_star
    index = 2 * n - 8 + 2 * (spec.c1A - D * wA)
    bound = 2 * n - 8 + 2 * (ds - D) * wA
    k = spec.family_k
    return SphereIndex(
        index=index,
        bound=bound,
        negative=index < 0,
        degree_condition=D > max(ds, ds + n - 4),
        family_index=index + k,
        family_condition=2 * D > max(2 * ds, 2 * ds + 2 * n - 8 + k),
    )


@dataclass(frozen=True)
class TangencyBound:
    max_order: int
    max_order_bound: Fraction
    ell: int
    three_points: bool
    three_points_sharp: bool

    def to_json(self):
        d = asdict(self)
        d["max_order_bound"] = str(self.max_order_bound)
        return d


def max_tangency_order(spec: DonaldsonSpec) -> TangencyBound:
    """Largest local intersection number and the at-least-three-points test.

    A sphere meeting Y at one point with index I has 2n-4+2c1(A)-2I >= 0, so
    I <= c1(A)+n-2 <= D_* omega(A)+n-2.  Since the intersection numbers sum to
    D omega(A), more than twice the bound forces three distinct points.
    """
    n, wA, ds = spec.n, spec.omegaA, spec.d_star
    I = spec.c1A + n - 2
    bound = ds * wA + n - 2
    ell = spec.degree() * wA
    return TangencyBound(
        max_order=I,
        max_order_bound=bound,
        ell=ell,
        three_points=ell > 2 * bound,
        three_points_sharp=ell > 2 * I,
    )


@dataclass(frozen=True)
class PairIndex:
    index: int
    negative: bool
    degree_condition: bool
    conclusive: bool

    def to_json(self):
        return asdict(self)


def index_two_hypersurfaces(spec: DonaldsonSpec) -> PairIndex:
    if spec.D0 is None or spec.D1 is None:
        raise ValidationError("both degrees D0 and D1 are needed")
    n, wA, ds = spec.n, spec.omegaA, spec.d_star
    total = spec.D0 + spec.D1
    index = 2 * n - 10 + 2 * spec.c1A - 2 * total * wA
    cond = total > max(ds, ds + n - 5)
    return PairIndex(index=index, negative=index < 0, degree_condition=cond,
                     conclusive=cond and spec.admissible)


def ell_of(D, omegaA) -> int:
    ell = as_integer(D, "D") * as_integer(omegaA, "omega(A)")
    return ell


def check_ell_at_least_three(n, theta0, norm_alpha, D, omegaA) -> int:
    """l = D omega(A) for D >= D*; D* >= 2n+2 >= 4 makes l >= 3 automatic."""
    D, wA = as_integer(D, "D"), as_integer(omegaA, "omega(A)")
    if D < degree_threshold(n, theta0, norm_alpha):
        raise ValidationError("D is below the degree threshold")
    if wA < 1:
        raise ValidationError("omega(A) must be at least 1")
    ell = D * wA
    if ell < 3:
        raise PropertyViolation(f"l = {ell} < 3")
    return ell


def enumerate_bounded_classes(omega_row, E, box=None, positive: bool = True) -> list[tuple[int, ...]]:
    """Integer classes A with |A_j| <= box (default E) and bounded energy.

    With the positivity filter 0 <= <omega, A> <= E; without it
    |<omega, A>| <= E, which keeps the set symmetric under A -> -A.
    """
    w = [as_rational(x) for x in omega_row]
    E = as_integer(E, "E")
    if E < 0:
        raise ValidationError("E must be non-negative")
    b = E if box is None else as_integer(box, "box")
    if b < 0:
        raise ValidationError("box bound must be non-negative")
    if not w:
        return []
    out = []
    for A in itertools.product(range(-b, b + 1), repeat=len(w)):
        e = sum(x * a for x, a in zip(w, A))
        if (0 <= e <= E) if positive else (abs(e) <= E):
            out.append(A)
    return out


def gw_normalization(ell0, ell1) -> tuple[Fraction, int]:
    """(1/(l0! l1!), l1!)."""
    l0, l1 = as_integer(ell0, "l0"), as_integer(ell1, "l1")
    if l0 < 0 or l1 < 0:
        raise ValidationError("orders must be non-negative")
    return Fraction(1, math.factorial(l0) * math.factorial(l1)), math.factorial(l1)


# ---------------------------------------------------------------- sweeps

THETA_GRID = tuple(Fraction(k, 10) for k in range(1, 10))


@dataclass
class SweepReport:
    cases: int = 0
    counterexamples: list = None

    def __post_init__(self):
        if self.counterexamples is None:
            self.counterexamples = []

    def to_json(self):
        return {"cases": self.cases, "counterexamples": self.counterexamples}


def threshold_sweep(n_max: int = 10, alpha_max: int = 10, omega_max: int = 10,
                    c1_span: int = 3, d_span: int = 2, thetas=THETA_GRID) -> SweepReport:
    """Check that every D >= D* satisfies the sphere and three-point conditions.

    The index grows with c1(A) and shrinks with D, so the top c1_span
    admissible values of c1(A) and the first d_span degrees are the hardest.
    """
    rep = SweepReport()
    for n in range(1, n_max + 1):
        for t in thetas:
            for a in range(alpha_max + 1):
                ds = d_star(t, a)
                d0 = _ceil(degree_threshold(n, t, a))
                for wA in range(1, omega_max + 1):
                    top = _floor(ds * wA)
                    for D in range(d0, d0 + d_span):
                        for c1 in range(top - c1_span + 1, top + 1):
                            spec = DonaldsonSpec(n, t, a, wA, c1, D=D)
                            rep.cases += 1
                            s = index_sphere_in_Y(spec)
                            m = max_tangency_order(spec)
                            if not (s.negative and s.degree_condition and m.three_points):
                                rep.counterexamples.append(
                                    {"n": n, "theta0": str(t), "alpha": a, "omegaA": wA, "c1A": c1, "D": D})
                            # l >= 3 is only claimed when D* >= 2n+2
                            if d0 >= 2 * n + 2 and m.ell < 3:
                                rep.counterexamples.append(
                                    {"n": n, "theta0": str(t), "alpha": a, "omegaA": wA, "D": D, "ell": m.ell})
    return rep


def pair_sweep(n_max: int = 10, alpha_max: int = 10, omega_max: int = 10,
               c1_span: int = 2, sum_span: int = 2, thetas=THETA_GRID) -> SweepReport:
    """Two-hypersurface index is negative once D0+D1 > max(D_*, D_*+n-5)."""
    rep = SweepReport()
    for n in range(1, n_max + 1):
        for t in thetas:
            for a in range(alpha_max + 1):
                ds = d_star(t, a)
                first = _floor(max(ds, ds + n - 5)) + 1
                for wA in range(1, omega_max + 1):
                    top = _floor(ds * wA)
                    for total in range(max(first, 2), max(first, 2) + sum_span):
                        D0, D1 = total // 2, total - total // 2
                        for c1 in range(top - c1_span + 1, top + 1):
                            spec = DonaldsonSpec(n, t, a, wA, c1, D0=D0, D1=D1)
                            rep.cases += 1
                            p = index_two_hypersurfaces(spec)
                            if not (p.conclusive and p.negative):
                                rep.counterexamples.append(
                                    {"n": n, "theta0": str(t), "alpha": a, "omegaA": wA, "c1A": c1, "D0": D0, "D1": D1})
    return rep


def bounds_verdict(spec: DonaldsonSpec) -> dict:
    """JSON verdict used by the command line."""
    out = {
        "d_star": str(spec.d_star),
        "d_threshold": str(spec.threshold),
        "admissible_c1": spec.admissible,
        "indices": {},
        "flags": {},
    }
    if spec.D is not None:
        s, m = index_sphere_in_Y(spec), max_tangency_order(spec)
        out["indices"]["sphere_in_Y"] = s.index
        out["indices"]["sphere_in_Y_bound"] = str(s.bound)
        out["indices"]["max_tangency_order"] = m.max_order
        out["indices"]["ell"] = m.ell
        out["flags"]["above_threshold"] = spec.D >= spec.threshold
        out["flags"]["no_spheres_in_Y"] = s.negative and s.degree_condition
        out["flags"]["three_points"] = m.three_points
        if spec.family_k:
            out["indices"]["family_sphere_in_Y"] = s.family_index
            out["flags"]["family_no_spheres_in_Y"] = s.family_index < 0 and s.family_condition
    if spec.D0 is not None and spec.D1 is not None:
        p = index_two_hypersurfaces(spec)
        out["indices"]["two_hypersurfaces"] = p.index
        out["flags"]["two_hypersurfaces_negative"] = p.negative
        out["flags"]["two_hypersurfaces_conclusive"] = p.conclusive
    return out

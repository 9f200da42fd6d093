"""Points of the Riemann sphere as projective pairs, Möbius maps, cross ratios.

Two arithmetic modes coexist: exact (Gaussian rationals) and floating point.
Mixing them falls back to floating point.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

from .errors import ValidationError

DEFAULT_TOL = 1e-12


class QQi:
    """Gaussian rational re + i*im with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def lift(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Rational)):
            return QQi(x, 0)
        return NotImplemented

    def __add__(self, o):
        o = QQi.lift(o)
        if o is NotImplemented:
            return complex(self) + o
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        q = QQi.lift(o)
        if q is NotImplemented:
            return complex(self) * o
        o = q
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QQi.lift(o)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, o):
        return QQi.lift(o) / self

    def conjugate(self):
        return QQi(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.abs2())

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, QQi):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Rational)):
            return self.im == 0 and self.re == o
        if isinstance(o, complex):
            return complex(self) == o
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


def _is_exact(x) -> bool:
    return isinstance(x, (QQi, int, Rational)) and not isinstance(x, bool)


class ExtPoint:
    """A point [a:b] of S^2; the affine value is a/b and [1:0] is infinity."""

    __slots__ = ("a", "b", "exact")

    def __init__(self, a, b=1):
        if _is_exact(a) and _is_exact(b):
            a, b = QQi.lift(a), QQi.lift(b)
            exact = True
        else:
            a, b = complex(a), complex(b)
            exact = False
            if not (cmath.isfinite(a) and cmath.isfinite(b)):
                raise ValidationError("non-finite projective coordinates")
        if not a and not b:
            raise ValidationError("[0:0] is not a point")
        self.a, self.b, self.exact = a, b, exact

    @classmethod
    def of(cls, x) -> "ExtPoint":
        if isinstance(x, ExtPoint):
            return x
        if isinstance(x, str):
            if x.strip().lower() in ("inf", "infinity", "oo"):
                return cls.infinity()
            raise ValidationError(f"cannot read point {x!r}")
        if isinstance(x, (list, tuple)) and len(x) == 2:
            re, im = x
            if _is_exact(re) and _is_exact(im):
                return cls(QQi(re, im))
            return cls(complex(float(re), float(im)))
        if isinstance(x, float) and math.isinf(x):
            return cls.infinity()
        return cls(x)

    @classmethod
    def infinity(cls, exact: bool = True) -> "ExtPoint":
        return cls(1, 0) if exact else cls(1.0, 0.0)

    def is_infinite(self, tol: float = DEFAULT_TOL) -> bool:
        if self.exact:
            return not self.b
        return abs(self.b) <= tol * math.hypot(abs(self.a), abs(self.b))

    def value(self):
        """Affine coordinate as a Python complex, or complex('inf')."""
        if self.exact:
            if not self.b:
                return complex(math.inf, 0)
            return complex(self.a / self.b)
        if self.b == 0:
            return complex(math.inf, 0)
        return self.a / self.b

    def exact_value(self) -> QQi | None:
        if not self.exact or not self.b:
            return None
        return self.a / self.b

    def as_float(self) -> "ExtPoint":
        return self if not self.exact else ExtPoint(complex(self.a), complex(self.b))

    def unit(self) -> tuple[complex, complex]:
        a, b = complex(self.a), complex(self.b)
        r = math.hypot(abs(a), abs(b))
        return a / r, b / r

    def same(self, other: "ExtPoint", tol: float = DEFAULT_TOL) -> bool:
        if self.exact and other.exact:
            return self.a * other.b == other.a * self.b
        (a1, b1), (a2, b2) = self.unit(), other.unit()
        return abs(a1 * b2 - a2 * b1) <= tol

    def to_json(self):
        v = self.value()
        if math.isinf(v.real):
            return "inf"
        return [v.real, v.imag]

    def __repr__(self):
        v = self.value()
        if math.isinf(v.real):
            return "ExtPoint(inf)"
        tag = "" if not self.exact else "exact "
        return f"ExtPoint({tag}{v})"


def det(p: ExtPoint, q: ExtPoint):
    if p.exact != q.exact:
        p, q = p.as_float(), q.as_float()
    return p.a * q.b - q.a * p.b


def chordal_distance(p: ExtPoint, q: ExtPoint) -> float:
    """Chordal distance on the unit sphere; 2 between antipodes such as 0 and inf."""
    (a1, b1), (a2, b2) = p.unit(), q.unit()
    return 2.0 * abs(a1 * b2 - a2 * b1)


ZERO = ExtPoint(0)
ONE = ExtPoint(1)
INF = ExtPoint.infinity()


def cross_ratio(z0, z1, z2, z3, tol: float = DEFAULT_TOL) -> ExtPoint:
    """w = (z1-z2)(z3-z0) / ((z0-z1)(z2-z3)) on S^2.

    Computed as a ratio of 2x2 determinants of projective representatives,
    which handles infinity uniformly.  If exactly two points coincide the
    limiting value 0, 1 or infinity is returned; three coincident points
    raise ValidationError.
    """
    zs = [ExtPoint.of(z) for z in (z0, z1, z2, z3)]
    exact = all(z.exact for z in zs)
    eq = {(i, j) for i in range(4) for j in range(i + 1, 4) if zs[i].same(zs[j], tol)}
    for triple in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        a, b, c = triple
        if (a, b) in eq and (b, c) in eq or (a, b) in eq and (a, c) in eq or (a, c) in eq and (b, c) in eq:
            raise ValidationError("cross ratio undefined: three coincident points")
    if eq:
        if eq & {(1, 2), (0, 3)}:
            return ZERO if exact else ExtPoint(0.0)
        if eq & {(0, 1), (2, 3)}:
            return INF if exact else ExtPoint.infinity(False)
        return ONE if exact else ExtPoint(1.0)
    num = det(zs[1], zs[2]) * det(zs[3], zs[0])
    den = det(zs[0], zs[1]) * det(zs[2], zs[3])
    return ExtPoint(num, den)


class Mobius:
    """z -> (m00 z + m01) / (m10 z + m11) acting on projective pairs."""

    __slots__ = ("m",)

    def __init__(self, m00, m01, m10, m11):
        self.m = (m00, m01, m10, m11)
        d = m00 * m11 - m01 * m10
        if (d == 0) if all(_is_exact(x) for x in self.m) else abs(complex(d)) < 1e-300:
            raise ValidationError("singular Möbius matrix")

    def __call__(self, p: ExtPoint) -> ExtPoint:
        m00, m01, m10, m11 = self.m
        if not p.exact or not all(_is_exact(x) for x in self.m):
            p = p.as_float()
            m00, m01, m10, m11 = (complex(x) for x in self.m)
        return ExtPoint(m00 * p.a + m01 * p.b, m10 * p.a + m11 * p.b)

    @classmethod
    def to_zero_one_infinity(cls, p1: ExtPoint, p2: ExtPoint, p3: ExtPoint) -> "Mobius":
        """The unique map with p1 -> 0, p2 -> 1, p3 -> inf."""
        if p1.same(p2, 0.0) or p1.same(p3, 0.0) or p2.same(p3, 0.0):
            raise ValidationError("three distinct points needed")
        exact = p1.exact and p2.exact and p3.exact
        if not exact:
            p1, p2, p3 = p1.as_float(), p2.as_float(), p3.as_float()
        s = det(p2, p3)
        t = det(p2, p1)
        # phi(z) = [det(z,p1) det(p2,p3) : det(z,p3) det(p2,p1)]
        return cls(s * p1.b, -s * p1.a, t * p3.b, -t * p3.a)

"""Local and global intersection numbers of polynomial curves with hypersurfaces.

Polynomials in one variable are ascending coefficient lists.  Entries may be
ints, Fractions, decimal strings, Gaussian rationals, [re, im] pairs (exact
when both parts are) or Python complex numbers.  Exact inputs give exact
answers; floating inputs are compared against a relative tolerance.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np
import sympy

from .errors import ValidationError
from .projective import QQi, _is_exact
from .trees import LabelledTree

TOL = 1e-10


# ---------------------------------------------------------------- coefficients

def coefficient(x):
    """Normalize one coefficient to QQi (exact) or complex."""
    if isinstance(x, QQi):
        return x
    if isinstance(x, bool):
        raise ValidationError("booleans are not coefficients")
    if isinstance(x, (int, Rational)):
        return QQi(x)
    if isinstance(x, str):
        try:
            return QQi(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot read coefficient {x!r}") from exc
    if isinstance(x, (list, tuple)) and len(x) == 2:
        re, im = x
        if isinstance(re, str):
            re = Fraction(re)
        if isinstance(im, str):
            im = Fraction(im)
        if _is_exact(re) and _is_exact(im):
            return QQi(re, im)
        return complex(float(re), float(im))
    if isinstance(x, (float, complex)):
        z = complex(x)
        if not cmath.isfinite(z):
            raise ValidationError("non-finite coefficient")
        return z
    raise ValidationError(f"cannot read coefficient {x!r}")


def poly(coeffs) -> list:
    """Normalized coefficient list with trailing zeros removed."""
    out = [coefficient(c) for c in coeffs]
    while out and _is_zero_exact(out[-1]):
        out.pop()
    return out


def _is_zero_exact(c) -> bool:
    return (isinstance(c, QQi) and not c) or (isinstance(c, complex) and c == 0)


def is_exact_poly(p) -> bool:
    return all(isinstance(c, QQi) for c in p)


def _point(z0):
    c = coefficient(z0)
    return c


def taylor_coefficients(p, z0) -> list:
    """Coefficients of p(z0 + w) in w, by repeated synthetic division."""
    p = poly(p)
    z0 = _point(z0)
    exact = is_exact_poly(p) and isinstance(z0, QQi)
    if not exact:
        p = [complex(c) for c in p]
        z0 = complex(z0)
    rem = list(p)
    out = []
    while rem:
        acc = QQi(0) if exact else 0j
        quotient = []
        for c in reversed(rem):
            acc = acc * z0 + c
            quotient.append(acc)
        out.append(quotient.pop())
        rem = list(reversed(quotient))
    return out


def vanishing_order(p, z0=0, tol: float = TOL) -> int:
    """Order of vanishing of the polynomial p at z0."""
    p = poly(p)
    if not p:
        raise ValidationError("h is identically zero: the curve lies in the hypersurface")
    coeffs = taylor_coefficients(p, z0)
    if all(isinstance(c, QQi) for c in coeffs):
        for m, c in enumerate(coeffs):
            if c:
                return m
    scale = max(abs(complex(c)) for c in coeffs)
    for m, c in enumerate(coeffs):
        if abs(complex(c)) > tol * scale:
            return m
    raise ValidationError("h is numerically zero")


def evaluator(p):
    """Float evaluator of a coefficient list (numpy ordering reversed)."""
    c = np.array([complex(x) for x in poly(p)][::-1], dtype=complex)
    if c.size == 0:
        return lambda z: np.zeros_like(np.asarray(z, dtype=complex))
    return lambda z: np.polyval(c, z)


# ---------------------------------------------------------------- winding numbers

@dataclass(frozen=True)
class Winding:
    value: int
    raw: float
    nodes: int

    def to_json(self):
        return {"value": self.value, "raw": self.raw, "nodes": self.nodes}


def local_intersection_winding(h, z0, radius: float, nodes: int = 4096,
                               max_nodes: int = 1 << 20) -> Winding:
    """Winding number of h around the circle |z - z0| = radius.

    h is a callable accepting numpy arrays or a coefficient list.  The phase
    is unwrapped between consecutive nodes; the node count doubles until every
    phase step is below pi/2 and the total lies within 0.1 of an integer.
    """
    if not callable(h):
        h = evaluator(h)
    if radius <= 0:
        raise ValidationError("radius must be positive")
    z0 = complex(coefficient(z0)) if not isinstance(z0, complex) else z0
    m = nodes
    while m <= max_nodes:
        z = z0 + radius * np.exp(2j * np.pi * np.arange(m + 1) / m)
        v = np.asarray(h(z), dtype=complex)
        a = np.abs(v)
        if not np.all(np.isfinite(v)):
            raise ValidationError("h is not finite on the contour")
        if a.min() <= 1e-13 * max(1.0, a.max()):
            raise ValidationError("h vanishes on the contour")
        steps = np.angle(v[1:] / v[:-1])
        total = float(steps.sum() / (2 * np.pi))
        if np.abs(steps).max() < np.pi / 2 and abs(total - round(total)) < 0.1:
            return Winding(int(round(total)), total, m)
        m *= 2
    raise ValidationError("winding number did not settle; refine the contour")


# ---------------------------------------------------------------- hypersurfaces

def _sym(c):
    c = coefficient(c)
    if isinstance(c, QQi):
        return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator)
    return sympy.nsimplify(c.real, rational=True) + sympy.I * sympy.nsimplify(c.imag, rational=True)


@dataclass
class Hypersurface:
    """Zero set of a polynomial given as {exponent tuple: coefficient}.

    In projective use the polynomial must be homogeneous in n+1 variables.
    """

    terms: dict
    nvars: int

    def __post_init__(self):
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or min(exps, default=0) < 0:
                raise ValidationError("bad monomial exponent")
            c = coefficient(c)
            if not _is_zero_exact(c):
                clean[exps] = c
        if not clean:
            raise ValidationError("zero polynomial defines no hypersurface")
        self.terms = clean

    @classmethod
    def coordinate(cls, nvars: int, index: int | None = None) -> "Hypersurface":
        """The coordinate hyperplane {w_index = 0}, the last coordinate by default."""
        i = nvars - 1 if index is None else index
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    @classmethod
    def from_json(cls, data) -> "Hypersurface":
        if isinstance(data, dict) and "coordinate" in data:
            return cls.coordinate(int(data["nvars"]), data.get("coordinate"))
        if isinstance(data, dict):
            terms = data["terms"]
            nvars = int(data["nvars"]) if "nvars" in data else len(terms[0][0])
        else:
            terms = data
            nvars = len(terms[0][0])
        return cls({tuple(e): c for e, c in terms}, nvars)

    def to_json(self):
        def enc(c):
            if isinstance(c, QQi):
                return [str(c.re), str(c.im)]
            return [c.real, c.imag]
        return {"nvars": self.nvars, "terms": [[list(e), enc(c)] for e, c in sorted(self.terms.items())]}

    @property
    def degree(self) -> int:
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) == 1

    def sympy_expr(self, xs):
        return sympy.Add(*[_sym(c) * sympy.Mul(*[x ** k for x, k in zip(xs, e)])
                           for e, c in self.terms.items()])


def pullback(Y: Hypersurface, components) -> list:
    """Coefficient list of Y(f(z)) for polynomial components f_i(z)."""
    comps = [poly(c) for c in components]
    if len(comps) != Y.nvars:
        raise ValidationError("number of components does not match the hypersurface")
    z = sympy.Symbol("z")
    xs = [sum((_sym(c) * z ** i for i, c in enumerate(p)), sympy.Integer(0)) for p in comps]
    expr = sympy.expand(Y.sympy_expr(xs))
    if expr == 0:
        return []
    P = sympy.Poly(expr, z)
    return [_from_sym(c) for c in reversed(P.all_coeffs())]


def _from_sym(c):
    re, im = sympy.re(c), sympy.im(c)
    if re.is_Rational and im.is_Rational:
        return QQi(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
    return complex(c)


# ---------------------------------------------------------------- global count

@dataclass
class IntersectionCertificate:
    total: int
    expected: int
    map_degree: int
    hypersurface_degree: int
    points: list
    base_point_degree: int

    def to_json(self):
        return {
            "total": self.total,
            "expected": self.expected,
            "map_degree": self.map_degree,
            "hypersurface_degree": self.hypersurface_degree,
            "base_point_degree": self.base_point_degree,
            "points": self.points,
        }


def _point_json(z):
    if z is None:
        return "inf"
    return [float(z.real), float(z.imag)]


def total_intersection(components, Y: Hypersurface) -> IntersectionCertificate:
    """Intersection number of [f_0(z):...:f_n(z)] with the projective hypersurface Y.

    The components are homogenized to a common degree in (s, t), common
    factors (base points) are divided out, and the pullback is split by
    square-free decomposition over Q(i).  The sum of root multiplicities,
    including the root at infinity, is compared with deg(f) deg(Y).
    """
    if not Y.is_homogeneous():
        raise ValidationError("projective hypersurface must be homogeneous")
    comps = [poly(c) for c in components]
    if len(comps) != Y.nvars:
        raise ValidationError("number of components does not match the hypersurface")
    if all(not p for p in comps):
        raise ValidationError("all components vanish")
    s, t = sympy.symbols("s t")
    d = max(len(p) for p in comps) - 1
    F = [sympy.expand(sum((_sym(c) * s ** i * t ** (d - i) for i, c in enumerate(p)), sympy.Integer(0)))
         for p in comps]
    g = sympy.Integer(0)
    for f in F:
        g = sympy.gcd(g, f) if g != 0 else f
    gdeg = sympy.Poly(g, s, t).total_degree() if g.free_symbols else 0
    if gdeg:
        F = [sympy.cancel(f / g) for f in F]
    deg_f = d - gdeg
    if deg_f < 1:
        raise ValidationError("constant map")
    P = sympy.expand(Y.sympy_expr(F))
    if P == 0:
        raise ValidationError("the curve lies in the hypersurface")
    total_degree = deg_f * Y.degree
    p = sympy.Poly(P.subs(t, 1), s, domain="QQ_I") if P.subs(t, 1) != 0 else None
    points = []
    counted = 0
    if p is not None and p.degree() > 0:
        _, factors = p.sqf_list()
        for fac, mult in factors:
            if fac.degree() == 0:
                continue
            cs = [complex(c) for c in fac.all_coeffs()]
            for r in np.roots(cs):
                points.append({"point": _point_json(r), "multiplicity": int(mult)})
                counted += mult
    finite_deg = p.degree() if p is not None else 0
    at_inf = total_degree - finite_deg
    if at_inf:
        points.append({"point": "inf", "multiplicity": int(at_inf)})
        counted += at_inf
    points.sort(key=lambda q: (q["point"] == "inf", str(q["point"])))
    return IntersectionCertificate(int(counted), int(total_degree), int(deg_f), int(Y.degree), points, int(gdeg))


# ---------------------------------------------------------------- normal jets

@dataclass(frozen=True)
class NormalJet:
    level: int
    defined: bool
    value: list | None
    first_nonzero: int | None
    contained: bool

    @property
    def tangency_order(self) -> int | None:
        return None if self.first_nonzero is None else self.first_nonzero - 1

    @property
    def local_index(self) -> int | None:
        return self.first_nonzero

    def to_json(self):
        enc = None
        if self.value is not None:
            enc = [[float(complex(v).real), float(complex(v).imag)] for v in self.value]
        return {
            "level": self.level,
            "defined": self.defined,
            "value": enc,
            "first_nonzero": self.first_nonzero,
            "tangency_order": self.tangency_order,
            "contained": self.contained,
        }


def _nonzero(c, scale, tol) -> bool:
    if isinstance(c, QQi):
        return bool(c)
    return abs(c) > tol * scale


def normal_jet(components, k: int, ell: int, tol: float = TOL) -> NormalJet:
    """l-jet of a holomorphic polynomial curve normal to C^k x 0 at s = 0.

    For holomorphic f the s-derivative of order l is l! times the l-th
    coefficient.  The jet is defined when the normal parts of all lower
    derivatives vanish; otherwise the first nonvanishing level is reported.
    """
    comps = [poly(c) for c in components]
    n = len(comps)
    if not 0 <= k < n:
        raise ValidationError("need 0 <= k < n")
    if ell < 1:
        raise ValidationError("jet level must be at least 1")
    normal = comps[k:]
    L = max((len(p) for p in comps), default=0)
    scale = max([abs(complex(c)) for p in comps for c in p] + [1.0])

    def coeff(p, i):
        return p[i] if i < len(p) else QQi(0)

    if any(_nonzero(coeff(p, 0), scale, tol) for p in normal):
        raise ValidationError("f(0) is not in Z")
    first = None
    for i in range(1, max(L, 1)):
        if any(_nonzero(coeff(p, i), scale, tol) for p in normal):
            first = i
            break
    contained = first is None
    defined = contained or ell <= first
    value = None
    if defined:
        fac = math.factorial(ell)
        value = [coeff(p, ell) * fac for p in normal]
        if not all(isinstance(v, QQi) for v in value):
            value = [complex(v) for v in value]
    return NormalJet(ell, defined, value, first, contained)


# ---------------------------------------------------------------- real jets and diffeomorphisms

def complex_to_real_series(components, order: int) -> np.ndarray:
    """Real coefficient array (2n, order+1) of s -> f(s) for real s."""
    comps = [poly(c) for c in components]
    out = np.zeros((2 * len(comps), order + 1))
    for j, p in enumerate(comps):
        for i, c in enumerate(p[: order + 1]):
            z = complex(c)
            out[2 * j, i], out[2 * j + 1, i] = z.real, z.imag
    return out


@dataclass
class PolynomialMap:
    """Real polynomial map R^m -> R^m, component i = sum c * x^e over terms[i]."""

    terms: list

    @property
    def dim(self) -> int:
        return len(self.terms)

    def linear_part(self) -> np.ndarray:
        m = self.dim
        A = np.zeros((m, m))
        for i, comp in enumerate(self.terms):
            for e, c in comp.items():
                if sum(e) == 1:
                    A[i, e.index(1)] += c
        return A

    def compose_series(self, f: np.ndarray) -> np.ndarray:
        """Truncated series of self(f(s)) to the order of f."""
        order = f.shape[1] - 1
        out = np.zeros_like(f)
        cache = {}

        def power(j, k):
            if (j, k) not in cache:
                cache[(j, k)] = _series_pow(f[j], k, order)
            return cache[(j, k)]

        for i, comp in enumerate(self.terms):
            for e, c in comp.items():
                acc = np.zeros(order + 1)
                acc[0] = 1.0
                for j, k in enumerate(e):
                    if k:
                        acc = np.convolve(acc, power(j, k))[: order + 1]
                out[i] += c * acc
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.array([sum(c * np.prod([x[j] ** k for j, k in enumerate(e)]) for e, c in comp.items())
                         for comp in self.terms])


def _series_pow(a: np.ndarray, k: int, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    out[0] = 1.0
    for _ in range(k):
        out = np.convolve(out, a)[: order + 1]
    return out


def random_adapted_diffeo(n: int, k: int, rng: np.random.Generator, degree: int = 3,
                          terms: int = 6, scale: float = 0.5) -> PolynomialMap:
    """Random polynomial map of R^{2n} fixing 0 and preserving R^{2k} = C^k x 0.

    The linear part is block upper triangular with invertible diagonal
    blocks; each nonlinear normal monomial contains a normal variable.
    """
    m, mk = 2 * n, 2 * k
    A = rng.normal(size=(m, m))
    A[mk:, :mk] = 0.0
    A[:mk, :mk] += 3 * np.eye(mk)
    A[mk:, mk:] += 3 * np.eye(m - mk)
    comps = []
    for i in range(m):
        comp = {}
        for j in range(m):
            if A[i, j]:
                e = [0] * m
                e[j] = 1
                comp[tuple(e)] = float(A[i, j])
        for _ in range(terms):
            deg = int(rng.integers(2, degree + 1))
            e = [0] * m
            for _ in range(deg):
                e[int(rng.integers(0, m))] += 1
            if i >= mk and not any(e[mk:]):
                e[int(rng.integers(mk, m))] += 1
            comp[tuple(e)] = comp.get(tuple(e), 0.0) + float(scale * rng.normal())
        comps.append(comp)
    return PolynomialMap(comps)


def jet_law_residual(components, phi: PolynomialMap, k: int, ell: int) -> float:
    """|[d^l(phi o f)/ds^l(0)] - [Dphi(0) d^l f/ds^l(0)]| in C^n / C^k, relative."""
    f = complex_to_real_series(components, ell)
    if np.abs(f[:, 0]).max() > 0:
        raise ValidationError("f(0) must be 0")
    mk = 2 * k
    if ell > 1 and np.abs(f[mk:, 1:ell]).max() > 0:
        raise ValidationError("lower normal derivatives of f do not vanish")
    fac = math.factorial(ell)
    lhs = phi.compose_series(f)[:, ell] * fac
    rhs = phi.linear_part() @ f[:, ell] * fac
    diff = np.abs(lhs[mk:] - rhs[mk:]).max()
    return float(diff / max(1.0, np.abs(rhs[mk:]).max()))


# ---------------------------------------------------------------- nodal curves

@dataclass
class NodalPolynomialMap:
    """Polynomial components f_alpha: C -> C^n over a tree.

    nodes[(a, b)] is the point of S_a joined to S_b; marks[i] is the point of
    marked point i on its component.  All points are finite affine values.
    """

    tree: LabelledTree
    components: dict
    nodes: dict
    marks: dict = field(default_factory=dict)

    def __post_init__(self):
        V = set(self.tree.vertices)
        if set(self.components) != V:
            raise ValidationError("one list of components per vertex is required")
        self.components = {v: [poly(p) for p in comps] for v, comps in self.components.items()}
        dims = {len(c) for c in self.components.values()}
        if len(dims) != 1:
            raise ValidationError("components must share the target dimension")
        for a, b in self.tree.edges:
            if (a, b) not in self.nodes or (b, a) not in self.nodes:
                raise ValidationError(f"nodal points for edge {(a, b)} are missing")
        for i in self.tree.labels:
            if i not in self.marks:
                raise ValidationError(f"marked point {i} has no position")

    def is_constant(self, v) -> bool:
        return all(len(p) <= 1 for p in self.components[v])

    def ghost_tree(self, v) -> set:
        if not self.is_constant(v):
            return set()
        seen, stack = {v}, [v]
        while stack:
            a = stack.pop()
            for b in self.tree.neighbors(a):
                if b not in seen and self.is_constant(b):
                    seen.add(b)
                    stack.append(b)
        return seen


def component_index(F: NodalPolynomialMap, Y: Hypersurface, v, z) -> int:
    h = pullback(Y, F.components[v])
    if not h:
        raise ValidationError(f"component {v} lies in the hypersurface")
    return vanishing_order(h, z)


def nodal_local_index(F: NodalPolynomialMap, Y: Hypersurface, label: int) -> int:
    """Local intersection number at a marked point of a nodal curve.

    On a nonconstant component this is the vanishing order of Y o f there.
    On a ghost component it is the sum over the nonconstant neighbours of the
    maximal ghost tree, each evaluated at the node facing the ghost tree.
    """
    v = F.tree.vertex_of(label)
    if not F.is_constant(v):
        return component_index(F, Y, v, F.marks[label])
    T1 = F.ghost_tree(v)
    T2 = [(b, a) for a in sorted(T1) for b in F.tree.neighbors(a) if b not in T1]
    for w in F.tree.vertices:
        if not F.is_constant(w) and not pullback(Y, F.components[w]):
            raise ValidationError(f"component {w} lies in the hypersurface")
    if not T2:
        warnings.warn("ghost tree without nonconstant neighbours; local index set to 0")
        return 0
    return sum(component_index(F, Y, b, F.nodes[(b, a)]) for b, a in T2)

"""Cutoffs on cross ratios, extension operators and coherent maps into R^d.

A profile xi is a compactly supported function of the cross-ratio
coordinates x_j = w_{0, i_1, i_2, i_j} (3 <= j <= l) of a decomposition I.
The extension of xi to all of the moduli space is

    E_I xi (c) = prod_{type II} chi(w_{0ijm}(c))
               * prod_{type I}  guard(w_{0ijm}(c))
               * xi(phi_I(c))

where chi is 1 within rho/2 of {0,1,inf} and 0 beyond rho, and guard is 0
within rho and 1 beyond 2*rho.  On M_I the type II cross ratios are exactly
0, 1 or inf and the support condition keeps type I cross ratios 2*rho away,
so both products are 1 there.  The guard factor is what makes supports of
different extensions disjoint, not only nearly so.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .nodal import (NodalCurve, StableDecomposition, cross_ratio_nodal, enumerate_decompositions,
                    random_points, triple_type)
from .projective import INF, ONE, ZERO, ExtPoint, QQi, cross_ratio
from .trees import LabelledTree


class SupportError(ValidationError):
    """A profile is nonzero where a type I cross ratio enters the guarded disks."""


def _num(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return x
    return Fraction(x)


def smoothstep(x, order: int = 3):
    """Polynomial step of degree 2*order-1, flat to order-1 derivatives at 0 and 1."""
    if x <= 0:
        return 0 * x
    if x >= 1:
        return 1 + 0 * x
    return x ** order * sum(math.comb(order - 1 + j, j) * (1 - x) ** j for j in range(order))


def chordal_sq_to_special(p: ExtPoint):
    """Squared chordal distance from p to the nearest of 0, 1, inf.

    Rational for exact points, so the cutoffs built from it stay exact.
    """
    if p.exact:
        a, b = p.a, p.b
        n = a.abs2() + b.abs2()
        cands = [4 * a.abs2() / n, 4 * b.abs2() / n, 4 * (a - b).abs2() / (2 * n)]
    else:
        a, b = p.a, p.b
        n = abs(a) ** 2 + abs(b) ** 2
        cands = [4 * abs(a) ** 2 / n, 4 * abs(b) ** 2 / n, 4 * abs(a - b) ** 2 / (2 * n)]
    return min(cands)


@dataclass(frozen=True)
class Cutoff:
    radius: object = Fraction(1, 10)
    order: int = 3

    def __post_init__(self):
        r = _num(self.radius)
        if not 0 < r < Fraction(1, 4):
            raise ValidationError("cutoff radius must lie in (0, 1/4)")
        object.__setattr__(self, "radius", r)

    def _ramp(self, d2, inner, outer):
        x = (d2 - inner * inner) / (outer * outer - inner * inner)
        return 1 - smoothstep(x, self.order)

    def chi(self, p: ExtPoint):
        """1 within radius/2 of {0,1,inf}, 0 beyond radius."""
        d2 = chordal_sq_to_special(p)
        r = self.radius if p.exact else float(self.radius)
        return self._ramp(d2, r / 2, r)

    def guard(self, p: ExtPoint):
        """0 within radius of {0,1,inf}, 1 beyond twice the radius."""
        d2 = chordal_sq_to_special(p)
        r = self.radius if p.exact else float(self.radius)
        return 1 - self._ramp(d2, r, 2 * r)

    def distance(self, p: ExtPoint) -> float:
        return math.sqrt(float(chordal_sq_to_special(p)))


# ---------------------------------------------------------------- profiles

def _eval_expr(node, coords):
    if "const" in node:
        return _num(node["const"])
    if "coord" in node:
        p = coords[node["coord"]]
        v = p.exact_value() if p.exact else None
        if v is None:
            z = p.value()
            if math.isinf(z.real):
                raise ValidationError("coordinate at infinity inside an expression")
            return z.imag if node.get("part") == "im" else z.real
        return v.im if node.get("part") == "im" else v.re
    if "add" in node:
        return sum((_eval_expr(e, coords) for e in node["add"]), 0)
    if "mul" in node:
        out = 1
        for e in node["mul"]:
            out = out * _eval_expr(e, coords)
            if out == 0:
                return out
        return out
    if "bump" in node:
        spec = node["bump"]
        r2 = _num(spec["radius"]) ** 2
        power = int(spec.get("power", 3))
        out = 1
        for p, c in zip(coords, spec["center"]):
            if p.is_infinite(0.0):
                return 0
            cre, cim = _num(c[0]), _num(c[1])
            v = p.exact_value() if p.exact else None
            if v is not None and isinstance(cre, Fraction) and isinstance(cim, Fraction):
                d2 = (v.re - cre) ** 2 + (v.im - cim) ** 2
            else:
                z = p.value()
                d2 = (z.real - float(cre)) ** 2 + (z.imag - float(cim)) ** 2
            if d2 >= r2:
                return 0
            out = out * (1 - d2 / r2) ** power
        return out
    raise ValidationError(f"unknown expression node {sorted(node)}")


def _has_bump(node) -> bool:
    if "bump" in node:
        return True
    if "mul" in node:
        return any(_has_bump(e) for e in node["mul"])
    return False


@dataclass(frozen=True)
class Profile:
    """Sum of coefficient vectors times scalar expressions, each compactly supported."""

    terms: tuple
    dim: int

    def __post_init__(self):
        for coeff, expr in self.terms:
            if len(coeff) != self.dim:
                raise ValidationError("coefficient vector has the wrong length")
            if not _has_bump(expr):
                raise ValidationError("every term needs a bump factor (compact support)")

    @classmethod
    def zero(cls, dim: int = 4) -> "Profile":
        return cls((), dim)

    @classmethod
    def bump(cls, center: Sequence, radius, coeff: Sequence, power: int = 3) -> "Profile":
        def enc(z):
            if isinstance(z, QQi):
                return [z.re, z.im]
            if isinstance(z, (list, tuple)):
                return list(z)
            z = complex(z)
            return [z.real, z.imag]
        expr = {"bump": {"center": [enc(z) for z in center], "radius": radius, "power": power}}
        return cls(((tuple(_num(x) for x in coeff), expr),), len(coeff))

    def __add__(self, other: "Profile") -> "Profile":
        if self.dim != other.dim:
            raise ValidationError("profiles of different dimension")
        return Profile(self.terms + other.terms, self.dim)

    def scale(self, a) -> "Profile":
        return Profile(tuple((tuple(a * x for x in c), e) for c, e in self.terms), self.dim)

    def __call__(self, coords: Sequence[ExtPoint]) -> tuple:
        out = [0] * self.dim
        for coeff, expr in self.terms:
            s = _eval_expr(expr, coords)
            if s != 0:
                out = [o + c * s for o, c in zip(out, coeff)]
        return tuple(out)

    def to_json(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x
        def walk(node):
            if isinstance(node, dict):
                return {k: walk(v) for k, v in node.items()}
            if isinstance(node, (list, tuple)):
                return [walk(v) for v in node]
            return enc(node)
        return {"dim": self.dim, "terms": [{"coeff": [enc(x) for x in c], "expr": walk(e)} for c, e in self.terms]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Profile":
        try:
            terms = tuple((tuple(_num(x) for x in t["coeff"]), t["expr"]) for t in doc["terms"])
            return cls(terms, int(doc["dim"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad profile document: {exc}") from None


# ---------------------------------------------------------------- extension

class CrossRatioCache:
    """Memoized w_{0ijm} on one curve."""

    def __init__(self, c: NodalCurve):
        self.curve = c
        self._w: dict = {}

    def __call__(self, i, j, m) -> ExtPoint:
        key = (i, j, m)
        if key not in self._w:
            self._w[key] = cross_ratio_nodal(self.curve, 0, i, j, m)
        return self._w[key]


def _as_cache(c) -> CrossRatioCache:
    if isinstance(c, CrossRatioCache):
        return c
    if isinstance(c, NodalCurve):
        return CrossRatioCache(c)
    from .nodal import smooth_curve
    return CrossRatioCache(smooth_curve(c))


def phi_coordinates(I: StableDecomposition, c) -> list[ExtPoint]:
    """phi_I(c) = (w_{0, i_1, i_2, i_j}) for 3 <= j <= l."""
    w = _as_cache(c)
    mins = I.minima
    return [w(mins[1], mins[2], mins[j]) for j in range(3, I.size)]


def block_configuration(coords: Sequence[ExtPoint]) -> list[ExtPoint]:
    """Points of blocks 0..l on the normalized component: 0, 1, inf, x_3, ..."""
    exact = all(p.exact for p in coords)
    base = [ZERO, ONE, INF] if exact else [ExtPoint(0.0), ExtPoint(1.0), ExtPoint.infinity(False)]
    return base + list(coords)


def check_support_point(I: StableDecomposition, coords: Sequence[ExtPoint], cutoff: Cutoff):
    """Raise SupportError if a type I cross ratio of the configuration is within 2*rho."""
    pts = block_configuration(coords)
    for a, b in itertools.combinations(range(len(pts)), 2):
        if pts[a].same(pts[b], 1e-12):
            raise SupportError(f"profile for {I} is nonzero where blocks {a} and {b} collide")
    limit = 2 * float(cutoff.radius)
    for a, b, c in itertools.permutations(range(1, len(pts)), 3):
        w = cross_ratio(pts[0], pts[a], pts[b], pts[c])
        if cutoff.distance(w) < limit:
            raise SupportError(
                f"profile for {I} is nonzero where the type I cross ratio of blocks "
                f"({a},{b},{c}) is {w.value()}, within {limit} of 0/1/inf")


def extension_factor(I: StableDecomposition, c, cutoff: Cutoff):
    """The scalar prod chi(type II) * prod guard(type I); lies in [0, 1]."""
    w = _as_cache(c)
    out = 1
    for t in itertools.combinations(range(1, I.k + 1), 3):
        kind = triple_type(I, t)
        if kind == "II":
            out = out * cutoff.chi(w(*t))
        elif kind == "I":
            out = out * cutoff.guard(w(*t))
        if out == 0:
            return out
    return out


def extend(I: StableDecomposition, xi: Profile, c, cutoff: Cutoff | None = None,
           check_support: bool = True) -> tuple:
    """E_I xi evaluated at a curve (nodal or a list of points for a smooth curve)."""
    cutoff = cutoff or Cutoff()
    if I.size < 4:
        raise ValidationError("extensions are defined for |I| >= 4")
    w = _as_cache(c)
    if max(w.curve.tree.labels) != I.k:
        raise ValidationError("curve and decomposition have different k")
    coords = phi_coordinates(I, w)
    val = xi(coords)
    if all(v == 0 for v in val):
        return val
    if check_support:
        check_support_point(I, coords, cutoff)
    f = extension_factor(I, w, cutoff)
    return tuple(f * v for v in val)


@dataclass
class CoherentMapModel:
    """F = sum over |I| >= 4 of E_I xi_I."""

    profiles: dict
    cutoff: Cutoff = field(default_factory=Cutoff)
    dim: int = 4

    def __post_init__(self):
        for I, xi in self.profiles.items():
            if I.size < 4:
                raise ValidationError(f"{I} has |I| < 4; F must vanish near such strata")
            if xi.dim != self.dim:
                raise ValidationError("profile dimension mismatch")
        ks = {I.k for I in self.profiles}
        if len(ks) > 1:
            raise ValidationError("profiles for different k")

    def component(self, I, c) -> tuple:
        xi = self.profiles.get(I)
        if xi is None:
            return (0,) * self.dim
        return extend(I, xi, c, self.cutoff)

    def __call__(self, c) -> tuple:
        w = _as_cache(c)
        out = [0] * self.dim
        for I in sorted(self.profiles, key=lambda d: d.parts):
            v = extend(I, self.profiles[I], w, self.cutoff)
            out = [a + b for a, b in zip(out, v)]
        return tuple(out)

    def restricted_profile(self, J: StableDecomposition) -> Callable:
        """F_J as a function of the |J|-point configuration, read off from F."""
        def f(coords):
            return self(curve_on_stratum(J, coords))
        return f


def p_coordinates(J: StableDecomposition, c: NodalCurve) -> list[ExtPoint]:
    """p_J(c) read directly off the component of z_0, normalized by a Möbius map."""
    from .projective import Mobius
    t = c.tree
    root = t.labels[0]
    pts = [c.point_toward(root, m) for m in J.minima]
    phi = Mobius.to_zero_one_infinity(pts[0], pts[1], pts[2])
    return [phi(p) for p in pts[3:]]


# ---------------------------------------------------------------- curve builders

def curve_on_stratum(J: StableDecomposition, block_points: Sequence, rng=None,
                     bubble_points: Mapping | None = None) -> NodalCurve:
    """A curve in M_J: z_0 = 0, blocks 1, 2 at 1, inf, block j at block_points[j-3].

    Singleton blocks are marked points on the root component; larger blocks
    hang off it as one bubble each.  Bubble positions come from
    bubble_points[block index] (a list of points for node, then labels) or
    are drawn from rng.
    """
    pts = block_configuration([ExtPoint.of(p) for p in block_points])
    if len(pts) != J.size:
        raise ValidationError("need |J| - 3 block points")
    verts, edges, labels, marks, nodes = [0], [], {0: 0}, {0: pts[0]}, {}
    rng = rng or np.random.default_rng(0)
    for a, part in enumerate(J.parts[1:], start=1):
        if len(part) == 1:
            labels[part[0]] = 0
            marks[part[0]] = pts[a]
            continue
        v = len(verts)
        verts.append(v)
        edges.append((0, v))
        nodes[(0, v)] = pts[a]
        if bubble_points and a in bubble_points:
            bp = [ExtPoint.of(z) for z in bubble_points[a]]
        else:
            bp = [ExtPoint(z) for z in random_points(rng, len(part) + 1)]
        nodes[(v, 0)] = bp[0]
        for i, z in zip(part, bp[1:]):
            labels[i] = v
            marks[i] = z
    return NodalCurve(LabelledTree(verts, edges, labels), nodes, marks)


def clustered_smooth_curve(J: StableDecomposition, block_points: Sequence, scale: float,
                           rng: np.random.Generator) -> NodalCurve:
    """Smooth curve near M_J: each block's labels crowd around its block point."""
    from .nodal import smooth_curve
    pts = [p.value() for p in block_configuration([ExtPoint.of(p) for p in block_points])]
    # block 2 sits at infinity; move to a chart where it is finite
    shift = [complex(1.0 / (z - 0.5)) if not math.isinf(z.real) else 0j for z in pts]
    marks = {}
    for a, part in enumerate(J.parts):
        offs = random_points(rng, len(part)) if len(part) > 1 else [0j]
        for i, o in zip(part, offs):
            marks[i] = ExtPoint(shift[a] + scale * o)
    return smooth_curve(marks)


def random_profile_center(I: StableDecomposition, rng: np.random.Generator, cutoff: Cutoff,
                          margin: float = 0.15, tries: int = 10000) -> list[complex]:
    """Coordinates whose type I cross ratios stay 2*rho + margin away from 0, 1, inf."""
    limit = 2 * float(cutoff.radius) + margin
    for _ in range(tries):
        xs = [complex(z) for z in (rng.normal(size=I.size - 3) + 1j * rng.normal(size=I.size - 3))]
        pts = block_configuration([ExtPoint(z) for z in xs])
        ok = True
        for a, b, c in itertools.permutations(range(1, len(pts)), 3):
            try:
                w = cross_ratio(pts[0], pts[a], pts[b], pts[c])
            except ValidationError:
                ok = False
                break
            if cutoff.distance(w) < limit:
                ok = False
                break
        if ok:
            return xs
    raise ValidationError(f"no admissible center found for {I}")


def random_model(k: int, rng: np.random.Generator, cutoff: Cutoff | None = None, dim: int = 4,
                 radius: float = 0.02, which: Iterable[StableDecomposition] | None = None):
    """A model with one bump profile per decomposition (|I| >= 4), plus the centers used."""
    cutoff = cutoff or Cutoff()
    profiles, centers = {}, {}
    decs = list(which) if which is not None else [I for I in enumerate_decompositions(k) if I.size >= 4]
    for I in decs:
        xs = random_profile_center(I, rng, cutoff)
        coeff = [float(x) for x in rng.normal(size=dim)]
        profiles[I] = Profile.bump(xs, radius, coeff)
        centers[I] = xs
    return CoherentMapModel(profiles, cutoff, dim), centers


# ---------------------------------------------------------------- checks

def disjoint_support_check(I, J, xi: Profile, eta: Profile, samples, cutoff: Cutoff | None = None) -> dict:
    """Pointwise min(|E_I xi|, |E_J eta|) must vanish; report violations."""
    if I == J:
        return {"skipped": True, "checked": 0, "violations": []}
    cutoff = cutoff or Cutoff()
    bad, checked, both_zero = [], 0, 0
    for c in samples:
        w = _as_cache(c)
        a = extend(I, xi, w, cutoff)
        b = extend(J, eta, w, cutoff)
        checked += 1
        na, nb = max(abs(x) for x in a), max(abs(x) for x in b)
        if na > 0 and nb > 0:
            bad.append({"curve": w.curve.to_json(), "E_I": float(na), "E_J": float(nb)})
        elif na == 0 and nb == 0:
            both_zero += 1
    return {"skipped": False, "checked": checked, "violations": bad, "both_zero": both_zero}


def near_minimal_strata(c, k: int, cutoff: Cutoff) -> list[StableDecomposition]:
    """Decompositions with |J| = 3 all of whose type II cross ratios lie within rho/2."""
    w = _as_cache(c)
    out = []
    half = float(cutoff.radius) / 2
    for J in enumerate_decompositions(k):
        if J.size != 3:
            continue
        if all(cutoff.distance(w(*t)) < half
               for t in itertools.combinations(range(1, k + 1), 3) if triple_type(J, t) == "II"):
            out.append(J)
    return out


# ---------------------------------------------------------------- collapsing

class CollapsedModel:
    """The map induced on a collapsed tree: F where z_0 sits over T minus T', else 0.

    Curves are given with labels {0..k}; forgetting z_0 must give back the
    tree T with the same vertex ids.
    """

    def __init__(self, model: CoherentMapModel, tree: LabelledTree, sub: Iterable[int]):
        from .trees import forget_labels, stabilize
        self.model = model
        self.tree = tree
        self.sub = frozenset(sub)
        if not self.sub <= set(tree.vertices):
            raise ValidationError("T' must be a set of vertices of T")
        if self.sub:
            seen, stack = set(), [min(self.sub)]
            while stack:
                v = stack.pop()
                seen.add(v)
                stack += [u for u in tree.neighbors(v) if u in self.sub and u not in seen]
            if seen != self.sub:
                raise ValidationError("T' must be connected")
        on_sub = [i for i, v in tree.labels.items() if v in self.sub]
        self.kept_labels = tuple(sorted(set(tree.labels) - set(on_sub) | ({max(on_sub)} if on_sub else set())))
        if len(self.kept_labels) >= 3:
            self.collapsed_tree = stabilize(forget_labels(tree, self.kept_labels))[0]
        else:
            self.collapsed_tree = None

    def position_of_z0(self, c: NodalCurve):
        from .trees import canonical_form, forget_labels, stabilize
        rest = [i for i in c.tree.labels if i != 0]
        base, tau = stabilize(forget_labels(c.tree, rest))
        if canonical_form(base) != canonical_form(self.tree) or set(base.vertices) != set(self.tree.vertices):
            raise ValidationError("curve does not lie over the tree of this model")
        return tau(c.tree.labels[0])

    def __call__(self, c: NodalCurve) -> tuple:
        if self.position_of_z0(c) in self.sub:
            return (0,) * self.model.dim
        return self.model(c)


def collapse_induced(model: CoherentMapModel, tree: LabelledTree, sub: Iterable[int]) -> CollapsedModel:
    return CollapsedModel(model, tree, sub)


def add_z0(tree: LabelledTree, base: NodalCurve, vertex: int, point) -> NodalCurve:
    """Place z_0 at a free point of a component of a curve over tree."""
    labels = dict(tree.labels)
    labels[0] = vertex
    t = LabelledTree(tree.vertices, tree.edges, labels)
    marks = dict(base.marked_points)
    marks[0] = ExtPoint.of(point)
    return NodalCurve(t, base.nodal_points, marks)

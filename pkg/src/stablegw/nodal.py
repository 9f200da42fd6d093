"""Nodal genus-zero curves, nodal cross ratios and stable decompositions.

A curve over a tree puts one sphere on each vertex.  z_{ab} is the node on
component a joining it to b, z_i the marked point i.  The special point on a
component *toward* label i is z_i itself if i lives there, otherwise the node
leading to the component of i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .projective import DEFAULT_TOL, ExtPoint, Mobius, cross_ratio
from .trees import LabelledTree, is_stable, set_partitions


class NodalCurve:
    __slots__ = ("tree", "nodal_points", "marked_points", "tol", "_dirs")

    def __init__(self, tree: LabelledTree, nodal_points: Mapping, marked_points: Mapping,
                 tol: float = DEFAULT_TOL):
        self.tree = tree
        self.tol = tol
        nodes = {}
        for a, b in tree.edges:
            for key in ((a, b), (b, a)):
                if key not in nodal_points:
                    raise ValidationError(f"missing nodal point z_{key}")
                nodes[key] = ExtPoint.of(nodal_points[key])
        marks = {}
        for i in tree.labels:
            if i not in marked_points:
                raise ValidationError(f"missing marked point z_{i}")
            marks[i] = ExtPoint.of(marked_points[i])
        self.nodal_points = nodes
        self.marked_points = marks
        self._dirs = None
        for v in tree.vertices:
            pts = [p for _, p in self.special_points(v)]
            for p, q in itertools.combinations(pts, 2):
                if p.same(q, tol):
                    raise ValidationError(f"special points on component {v} collide")

    def special_points(self, v) -> list[tuple[tuple, ExtPoint]]:
        """Special points of component v sorted by (label, then adjacent vertex)."""
        out = [(("label", i), self.marked_points[i]) for i in self.tree.labels_at(v)]
        out += [(("node", u), self.nodal_points[(v, u)]) for u in self.tree.neighbors(v)]
        return out

    def _directions(self):
        if self._dirs is None:
            t = self.tree
            dirs = {}
            for v in t.vertices:
                d = {i: ("label", i) for i in t.labels_at(v)}
                for u in t.neighbors(v):
                    stack, seen = [u], {v, u}
                    while stack:
                        x = stack.pop()
                        for i in t.labels_at(x):
                            d[i] = ("node", u)
                        for y in t.neighbors(x):
                            if y not in seen:
                                seen.add(y)
                                stack.append(y)
                dirs[v] = d
            self._dirs = dirs
        return self._dirs

    def direction(self, v, label) -> tuple:
        try:
            return self._directions()[v][label]
        except KeyError:
            raise ValidationError(f"unknown label {label}") from None

    def point_toward(self, v, label) -> ExtPoint:
        """z_{v,label} in the notation of the module docstring."""
        kind, x = self.direction(v, label)
        return self.marked_points[x] if kind == "label" else self.nodal_points[(v, x)]

    def with_points(self, nodal_points=None, marked_points=None) -> "NodalCurve":
        return NodalCurve(self.tree, nodal_points or self.nodal_points,
                          marked_points or self.marked_points, self.tol)

    def to_json(self) -> dict:
        doc = self.tree.to_json()
        doc["nodal_points"] = {f"{a},{b}": p.to_json() for (a, b), p in sorted(self.nodal_points.items())}
        doc["marked_points"] = {str(i): p.to_json() for i, p in sorted(self.marked_points.items())}
        return doc

    @classmethod
    def from_json(cls, doc: Mapping, tol: float = DEFAULT_TOL) -> "NodalCurve":
        tree = LabelledTree.from_json(doc)
        try:
            nodes = {}
            for key, p in doc.get("nodal_points", {}).items():
                a, b = (int(x) for x in key.split(","))
                nodes[(a, b)] = ExtPoint.of(p)
            marks = {int(i): ExtPoint.of(p) for i, p in doc["marked_points"].items()}
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"bad curve document: {exc}") from None
        return cls(tree, nodes, marks, tol)


def smooth_curve(points: Mapping | Sequence, tol: float = DEFAULT_TOL) -> NodalCurve:
    """One-component curve; a sequence is read as labels 0, 1, 2, ..."""
    if not isinstance(points, Mapping):
        points = dict(enumerate(points))
    tree = LabelledTree([0], [], {i: 0 for i in points})
    return NodalCurve(tree, {}, points, tol)


def cross_ratio_nodal(c: NodalCurve, i, j, m, n) -> ExtPoint:
    """Continuous extension of w_{ijmn} to nodal curves.

    Evaluated on a component where no three of the four resolved points
    coincide.  If all four directions are distinct that component is unique;
    otherwise several components may qualify, all giving the same value in
    {0, 1, inf}, and we check that they agree.
    """
    labs = (i, j, m, n)
    if len(set(labs)) != 4:
        raise ValidationError("cross ratio needs four distinct labels")
    if not is_stable(c.tree):
        raise ValidationError("nodal cross ratios need a stable curve")
    values = []
    for v in c.tree.vertices:
        dirs = [c.direction(v, x) for x in labs]
        if max(dirs.count(d) for d in dirs) >= 3:
            continue
        w = cross_ratio(*(c.point_toward(v, x) for x in labs), tol=c.tol)
        if len(set(dirs)) == 4:
            return w
        values.append((v, w))
    if not values:  # pragma: no cover - impossible on a stable tree
        raise ValidationError("no component resolves these four labels")
    first = values[0][1]
    for v, w in values[1:]:
        if not w.same(first, c.tol):
            raise ValidationError(f"components {values[0][0]} and {v} disagree on w_{labs}")
    return first


# ---------------------------------------------------------------- decompositions

@dataclass(frozen=True)
class StableDecomposition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(tuple(sorted(p)) for p in self.parts)
        if any(not p for p in parts):
            raise ValidationError("empty part")
        parts = tuple(sorted(parts, key=min))
        flat = [x for p in parts for x in p]
        if sorted(flat) != list(range(len(flat))):
            raise ValidationError("parts must partition {0..k}")
        if parts[0] != (0,):
            raise ValidationError("the part containing 0 must be {0}")
        if len(parts) < 3:
            raise ValidationError("a stable decomposition has at least 3 parts")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "_block", {x: a for a, p in enumerate(parts) for x in p})

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]]) -> "StableDecomposition":
        return cls(tuple(tuple(p) for p in parts))

    @property
    def k(self) -> int:
        return sum(len(p) for p in self.parts) - 1

    @property
    def size(self) -> int:
        """|I| = l + 1."""
        return len(self.parts)

    @property
    def ell(self) -> int:
        return len(self.parts) - 1

    @property
    def minima(self) -> tuple[int, ...]:
        """i_0 < i_1 < ... < i_l."""
        return tuple(p[0] for p in self.parts)

    def block(self, i: int) -> int:
        try:
            return self._block[i]
        except KeyError:
            raise ValidationError(f"index {i} out of range") from None

    def equivalent(self, i: int, j: int) -> bool:
        return self.block(i) == self.block(j)

    def __repr__(self):
        return "(" + ",".join("{" + ",".join(map(str, p)) + "}" for p in self.parts) + ")"

    def to_json(self):
        return [list(p) for p in self.parts]


def decomposition_of_tree(t: LabelledTree) -> StableDecomposition:
    if 0 not in t.labels:
        raise ValidationError("decompositions need the extra label 0")
    root = t.labels[0]
    groups: dict = {}
    for i in t.labels:
        groups.setdefault(("label", i) if t.labels[i] == root else ("node", t.toward(root, i)), []).append(i)
    return StableDecomposition.of(groups.values())


def stable_decomposition(c: NodalCurve | LabelledTree) -> StableDecomposition:
    """Group {0..k} by the special point on the component of z_0 they lead to."""
    t = c if isinstance(c, LabelledTree) else c.tree
    if not is_stable(t):
        raise ValidationError("stable decompositions need a stable curve")
    return decomposition_of_tree(t)


def enumerate_decompositions(k: int) -> list[StableDecomposition]:
    out = []
    for blocks in set_partitions(list(range(1, k + 1))):
        if len(blocks) >= 2:
            out.append(StableDecomposition.of([(0,)] + blocks))
    return sorted(out, key=lambda d: d.parts)


TYPE_ORDER = {"I": 1, "II": 2, "III": 3}


def triple_type(I: StableDecomposition, triple: Sequence[int]) -> str:
    i, j, m = triple
    if len({i, j, m}) != 3 or min(triple) < 1 or max(triple) > I.k:
        raise ValidationError(f"triple {tuple(triple)} needs distinct indices in 1..{I.k}")
    pairs = sum(I.equivalent(a, b) for a, b in ((i, j), (i, m), (j, m)))
    return {0: "I", 1: "II", 3: "III"}[pairs]


def is_refinement(J: StableDecomposition, I: StableDecomposition) -> bool:
    """Does every part of J sit inside a part of I?"""
    if J.k != I.k:
        raise ValidationError("decompositions of different k")
    return all(len({I.block(x) for x in p}) == 1 for p in J.parts)


def witness_refinement(I: StableDecomposition, J: StableDecomposition) -> tuple[int, int, int]:
    """Triple of type I for J and type II for I, when J strictly refines I."""
    if J == I or not is_refinement(J, I):
        raise ValidationError("need J refining I with J != I")
    for p in I.parts:
        for i, j in itertools.combinations(p, 2):
            if not J.equivalent(i, j):
                m = next(x for x in range(1, I.k + 1) if not I.equivalent(x, i))
                return tuple(sorted((i, j, m)))
    raise AssertionError("unreachable for J != I")  # pragma: no cover


def nonrefinement_with_branch(I: StableDecomposition, J: StableDecomposition):
    """Triple of type I for I and type II for J plus the branch of the construction used."""
    if I.size < 4:
        raise ValidationError("need |I| >= 4")
    if J == I or is_refinement(J, I):
        raise ValidationError("need J not refining I")
    ell = I.ell
    Ja = next(set(p) for p in J.parts[1:] if len({I.block(x) for x in p}) > 1)
    B = sorted({I.block(x) for x in Ja})
    if B != list(range(1, ell + 1)):
        d = next(x for x in range(1, ell + 1) if x not in B)
        b, c = B[0], B[1]
        m = I.parts[d][0]
        branch = "B-proper"
    else:
        d = next(x for x in range(1, ell + 1) if not set(I.parts[x]) <= Ja)
        b, c = [x for x in B if x != d][:2]
        m = min(set(I.parts[d]) - Ja)
        branch = "B-full"
    i = min(x for x in Ja if I.block(x) == b)
    j = min(x for x in Ja if I.block(x) == c)
    return tuple(sorted((i, j, m))), branch


def witness_nonrefinement(I: StableDecomposition, J: StableDecomposition) -> tuple[int, int, int]:
    return nonrefinement_with_branch(I, J)[0]


# ---------------------------------------------------------------- normalization

def normalize_component(c: NodalCurve, v) -> NodalCurve:
    """Move the first three special points of component v to 0, 1, inf."""
    sp = c.special_points(v)
    if len(sp) < 3:
        raise ValidationError(f"component {v} has fewer than 3 special points")
    phi = Mobius.to_zero_one_infinity(sp[0][1], sp[1][1], sp[2][1])
    marks = dict(c.marked_points)
    nodes = dict(c.nodal_points)
    for (kind, x), p in sp:
        if kind == "label":
            marks[x] = phi(p)
        else:
            nodes[(v, x)] = phi(p)
    return c.with_points(nodes, marks)


def cross_ratio_coordinates(c: NodalCurve) -> list[ExtPoint]:
    """(w_{0,1,2,j}) for 3 <= j <= k; on a curve with z0=0, z1=1, z2=inf this is (z_j)."""
    k = max(c.tree.labels)
    return [cross_ratio_nodal(c, 0, 1, 2, j) for j in range(3, k + 1)]


# ---------------------------------------------------------------- sampling

def random_points(rng: np.random.Generator, count: int, min_gap: float = 1e-3) -> list[complex]:
    while True:
        z = rng.normal(size=count) + 1j * rng.normal(size=count)
        if count < 2 or min(abs(a - b) for a, b in itertools.combinations(z, 2)) > min_gap:
            return [complex(x) for x in z]


def random_curve(t: LabelledTree, rng: np.random.Generator) -> NodalCurve:
    """Random distinct special points on every component of t."""
    marks, nodes = {}, {}
    for v in t.vertices:
        keys = [("label", i) for i in t.labels_at(v)] + [("node", u) for u in t.neighbors(v)]
        for (kind, x), z in zip(keys, random_points(rng, len(keys))):
            if kind == "label":
                marks[x] = ExtPoint(z)
            else:
                nodes[(v, x)] = ExtPoint(z)
    return NodalCurve(t, nodes, marks)

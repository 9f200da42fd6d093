"""Labelled trees, stability, stabilization and stratum bookkeeping.

A k-labelled tree is a finite tree whose vertices carry a partition of the
marked-point labels.  Vertex ids are opaque integers.  Label sets are usually
{1..k}; curves with an extra point use {0..k}, so any set of distinct
non-negative integers is accepted.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ResourceError, ValidationError

DEFAULT_ENUMERATION_BOUND = 8


class LabelledTree:
    __slots__ = ("vertices", "edges", "labels", "_adj", "_at")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Sequence[int]],
                 labels: Mapping[int, int]):
        verts = tuple(sorted(int(v) for v in vertices))
        if not verts:
            raise ValidationError("a tree needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise ValidationError("duplicate vertex ids")
        vset = set(verts)
        norm = set()
        for e in edges:
            a, b = (int(x) for x in e)
            if a == b:
                raise ValidationError(f"self-loop at vertex {a}")
            if a not in vset or b not in vset:
                raise ValidationError(f"edge ({a},{b}) uses an unknown vertex")
            key = (min(a, b), max(a, b))
            if key in norm:
                raise ValidationError(f"duplicate edge {key}")
            norm.add(key)
        adj: dict[int, set[int]] = {v: set() for v in verts}
        for a, b in norm:
            adj[a].add(b)
            adj[b].add(a)
        if len(norm) != len(verts) - 1:
            raise ValidationError("edge count must be |T|-1 for a tree")
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(verts):
            raise ValidationError("graph is disconnected (or has a cycle)")
        labs = {}
        for i, v in labels.items():
            i, v = int(i), int(v)
            if i < 0:
                raise ValidationError(f"negative label {i}")
            if v not in vset:
                raise ValidationError(f"label {i} sits on unknown vertex {v}")
            labs[i] = v
        self.vertices = verts
        self.edges = tuple(sorted(norm))
        self.labels = dict(sorted(labs.items()))
        self._adj = {v: tuple(sorted(adj[v])) for v in verts}
        at: dict[int, list[int]] = {v: [] for v in verts}
        for i, v in self.labels.items():
            at[v].append(i)
        self._at = {v: tuple(ls) for v, ls in at.items()}

    # basic structure
    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def labels_at(self, v: int) -> tuple[int, ...]:
        return self._at[v]

    def special_count(self, v: int) -> int:
        """n_alpha: marked points plus nodes on the component."""
        return len(self._at[v]) + len(self._adj[v])

    def vertex_of(self, label: int) -> int:
        try:
            return self.labels[label]
        except KeyError:
            raise ValidationError(f"unknown label {label}") from None

    def path(self, a: int, b: int) -> list[int]:
        """Vertices on the unique path from a to b, both ends included."""
        parent = {a: None}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            if v == b:
                break
            for u in self._adj[v]:
                if u not in parent:
                    parent[u] = v
                    queue.append(u)
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return out[::-1]

    def toward(self, v: int, label: int) -> int | None:
        """Neighbour of v in the direction of a label, or None if it sits on v."""
        target = self.vertex_of(label)
        if target == v:
            return None
        return self.path(v, target)[1]

    def is_stable(self) -> bool:
        return is_stable(self)

    def __eq__(self, other):
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return (self.vertices, self.edges, self.labels) == (other.vertices, other.edges, other.labels)

    def __hash__(self):
        return hash((self.vertices, self.edges, tuple(self.labels.items())))

    def __repr__(self):
        parts = [f"{v}{list(self._at[v])}" for v in self.vertices]
        return f"LabelledTree({', '.join(parts)}; edges={list(self.edges)})"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "labels": {str(i): v for i, v in self.labels.items()},
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "LabelledTree":
        try:
            t = cls(doc["vertices"], doc["edges"], {int(i): v for i, v in doc["labels"].items()})
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad tree document: {exc}") from None
        if "k" in doc and int(doc["k"]) != t.k:
            raise ValidationError(f"k={doc['k']} but {t.k} labels given")
        return t


def single_vertex(labels: Iterable[int]) -> LabelledTree:
    return LabelledTree([0], [], {i: 0 for i in labels})


def is_stable(t: LabelledTree) -> bool:
    return all(t.special_count(v) >= 3 for v in t.vertices)


def canonical_form(t: LabelledTree) -> str:
    """Minimal rooted encoding over all roots; equal iff label-preserving isomorphic."""
    def enc(v, parent):
        kids = sorted(enc(u, v) for u in t.neighbors(v) if u != parent)
        return "(" + ",".join(str(i) for i in t.labels_at(v)) + "|" + "".join(kids) + ")"
    return min(enc(r, None) for r in t.vertices)


def isomorphic(a: LabelledTree, b: LabelledTree) -> bool:
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------- stabilization

@dataclass(frozen=True)
class TreeMorphism:
    vertex_map: dict
    modes: dict

    def __call__(self, v):
        return self.vertex_map[v]

    @property
    def collapsed(self) -> tuple[int, ...]:
        return tuple(v for v, m in sorted(self.modes.items()) if m == "collapsed")


def _nearest_survivor(t: LabelledTree, survivors: set[int]) -> dict[int, int]:
    best: dict[int, tuple[int, int]] = {}
    for s in sorted(survivors):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in t.neighbors(v):
                if u not in dist and u not in survivors:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        for v, d in dist.items():
            if v not in best or (d, s) < best[v]:
                best[v] = (d, s)
    return {v: s for v, (_, s) in best.items()}


def stabilize(t: LabelledTree) -> tuple[LabelledTree, TreeMorphism]:
    """Delete unstable vertices until none is left.

    A deleted vertex with one remaining neighbour hands its labels to that
    neighbour; an unlabelled vertex with two neighbours is bridged.  Every
    deleted vertex maps to its nearest survivor (smaller id on a tie, which
    only happens for unlabelled chains).
    """
    if t.k < 3:
        raise ValidationError("trees with fewer than 3 labels have no stabilization")
    adj = {v: set(t.neighbors(v)) for v in t.vertices}
    labs = {v: set(t.labels_at(v)) for v in t.vertices}
    while True:
        bad = [v for v in sorted(adj) if len(adj[v]) + len(labs[v]) < 3]
        if not bad:
            break
        v = bad[0]
        nbrs = sorted(adj[v])
        if len(nbrs) == 1:
            u = nbrs[0]
            labs[u] |= labs[v]
            adj[u].discard(v)
        elif len(nbrs) == 2:
            u, w = nbrs
            adj[u].discard(v)
            adj[w].discard(v)
            adj[u].add(w)
            adj[w].add(u)
        else:  # pragma: no cover - only reachable for k < 3
            raise ValidationError("tree collapses completely")
        del adj[v], labs[v]
    survivors = set(adj)
    out = LabelledTree(
        sorted(survivors),
        {(min(a, b), max(a, b)) for a in adj for b in adj[a]},
        {i: v for v in labs for i in labs[v]},
    )
    tau = _nearest_survivor(t, survivors)
    for i, v in t.labels.items():
        if tau[v] != out.labels[i]:  # pragma: no cover - guarded by tests
            raise AssertionError("label migration disagrees with the collapse map")
    modes = {v: ("bijective" if v in survivors else "collapsed") for v in t.vertices}
    return out, TreeMorphism(tau, modes)


def forget_labels(t: LabelledTree, keep: Iterable[int]) -> LabelledTree:
    keep = set(keep)
    return LabelledTree(t.vertices, t.edges, {i: v for i, v in t.labels.items() if i in keep})


def contract_edges(t: LabelledTree, edges: Iterable[Sequence[int]]) -> LabelledTree:
    """Collapse each listed edge; the merged vertex keeps the smaller id."""
    rep = {v: v for v in t.vertices}

    def find(v):
        while rep[v] != v:
            rep[v] = rep[rep[v]]
            v = rep[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            rep[max(ra, rb)] = min(ra, rb)
    verts = sorted({find(v) for v in t.vertices})
    new_edges = {(min(find(a), find(b)), max(find(a), find(b)))
                 for a, b in t.edges if find(a) != find(b)}
    return LabelledTree(verts, new_edges, {i: find(v) for i, v in t.labels.items()})


def collapses_onto(source: LabelledTree, target: LabelledTree) -> bool:
    """Is there a surjective tree homomorphism source -> target respecting labels?

    Such a map collapses subtrees, i.e. contracts a set of edges, so we try
    every set of the right size.  Means M_source lies in the closure of M_target.
    """
    if set(source.labels) != set(target.labels):
        return False
    extra = source.edge_count - target.edge_count
    if extra < 0:
        return False
    want = canonical_form(target)
    return any(canonical_form(contract_edges(source, sub)) == want
               for sub in itertools.combinations(source.edges, extra))


# ---------------------------------------------------------------- enumeration

def set_partitions(items: Sequence) -> Iterator[list[tuple]]:
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


def _hanging(labels: tuple) -> Iterator[tuple]:
    # a vertex below a node: its own labels plus one subtree per child block
    for r in range(len(labels) + 1):
        for own in itertools.combinations(labels, r):
            rest = [x for x in labels if x not in own]
            for blocks in set_partitions(rest):
                if any(len(b) < 2 for b in blocks) or r + len(blocks) + 1 < 3:
                    continue
                for kids in itertools.product(*(list(_hanging(tuple(sorted(b)))) for b in blocks)):
                    yield (own, kids)


def _rooted(labels: tuple) -> Iterator[tuple]:
    first, others = labels[0], labels[1:]
    for r in range(len(others) + 1):
        for extra in itertools.combinations(others, r):
            own = (first,) + extra
            rest = [x for x in others if x not in extra]
            for blocks in set_partitions(rest):
                if any(len(b) < 2 for b in blocks) or len(own) + len(blocks) < 3:
                    continue
                for kids in itertools.product(*(list(_hanging(tuple(sorted(b)))) for b in blocks)):
                    yield (own, kids)


def _build(shape) -> LabelledTree:
    verts, edges, labels = [], [], {}
    queue = deque([(shape, None)])
    while queue:
        (own, kids), parent = queue.popleft()
        v = len(verts)
        verts.append(v)
        if parent is not None:
            edges.append((parent, v))
        for i in own:
            labels[i] = v
        for kid in kids:
            queue.append((kid, v))
    return LabelledTree(verts, edges, labels)


def enumerate_stable_trees(k: int, max_edges: int | None = None,
                           bound: int = DEFAULT_ENUMERATION_BOUND) -> list[LabelledTree]:
    """One representative per isomorphism class of stable k-labelled trees.

    Rooting at the vertex of label 1, a stable tree is the same thing as a
    nested choice of label sets, so the generator never produces duplicates.
    Sorted by (edge count, canonical form).
    """
    if k < 3:
        raise ValidationError("stable k-labelled trees need k >= 3")
    if k > bound:
        raise ResourceError(f"k={k} exceeds the enumeration bound {bound}")
    trees = [_build(s) for s in _rooted(tuple(range(1, k + 1)))]
    if max_edges is not None:
        trees = [t for t in trees if t.edge_count <= max_edges]
    return sorted(trees, key=lambda t: (t.edge_count, canonical_form(t)))


def strata_counts(k: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> dict[int, int]:
    counts: dict[int, int] = {}
    for t in enumerate_stable_trees(k, bound=bound):
        counts[t.edge_count] = counts.get(t.edge_count, 0) + 1
    return dict(sorted(counts.items()))


# ---------------------------------------------------------------- dimensions

def stratum_dim(t: LabelledTree) -> int:
    """Complex dimension k - 3 - e(T) of the stratum of curves modelled on t."""
    if not is_stable(t):
        raise ValidationError("stratum dimension needs a stable tree")
    return t.k - 3 - t.edge_count


def moduli_dim(n: int, k: int, c1A: int, eT: int, codimR_constraint: int = 0) -> int:
    """Real dimension 2(n-3+k+c1(A)-e(T)) minus a real constraint codimension."""
    return 2 * (n - 3 + k + c1A - eT) - codimR_constraint


def tangency_moduli_dim(n: int, c1A: int, k: int,
                        constraints: Iterable[tuple[int, int]] = ()) -> int:
    """2n-6+2c1(A)+2k minus 2(l_i+1)codim_C Z_i per constraint; l_i=-1 is no condition."""
    total = 2 * n - 6 + 2 * c1A + 2 * k
    for codim, order in constraints:
        if order < -1:
            raise ValidationError(f"tangency order {order} < -1")
        total -= 2 * (order + 1) * codim
    return total


# ---------------------------------------------------------------- weighted trees

@dataclass(frozen=True)
class WeightedTree:
    tree: LabelledTree
    weights: dict
    omega_row: tuple = ()
    c1_row: tuple = ()

    def __post_init__(self):
        ranks = {len(w) for w in self.weights.values()}
        if set(self.weights) != set(self.tree.vertices):
            raise ValidationError("every vertex needs a weight")
        if len(ranks) > 1:
            raise ValidationError("weights of different ranks")
        for row in (self.omega_row, self.c1_row):
            if row and ranks and len(row) != next(iter(ranks)):
                raise ValidationError("pairing row has the wrong rank")
        if self.omega_row:
            for v in self.tree.vertices:
                if self.omega(v) < 0:
                    raise ValidationError(f"omega(A_{v}) < 0")

    def is_ghost(self, v) -> bool:
        return not any(self.weights[v])

    def omega(self, v) -> int:
        return sum(a * b for a, b in zip(self.omega_row, self.weights[v]))

    def c1(self, v) -> int:
        return sum(a * b for a, b in zip(self.c1_row, self.weights[v]))

    def total(self) -> tuple:
        rank = len(next(iter(self.weights.values())))
        return tuple(sum(self.weights[v][j] for v in self.tree.vertices) for j in range(rank))


def weighted_stable(w: WeightedTree) -> bool:
    return all(w.tree.special_count(v) >= 3 for v in w.tree.vertices if w.is_ghost(v))


def ghost_forest(w: WeightedTree) -> list[tuple[int, ...]]:
    """Maximal connected sets of zero-weight vertices, sorted."""
    seen: set[int] = set()
    out = []
    for v in w.tree.vertices:
        if v in seen or not w.is_ghost(v):
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for u in w.tree.neighbors(x):
                if u not in seen and w.is_ghost(u):
                    seen.add(u)
                    stack.append(u)
        out.append(tuple(sorted(comp)))
    return out


def reduced_index_set(w: WeightedTree) -> tuple[int, ...]:
    """Labels on non-ghost vertices plus the largest label of each ghost tree.

    A ghost tree carrying no label contributes nothing.
    """
    t = w.tree
    keep = {i for i, v in t.labels.items() if not w.is_ghost(v)}
    for comp in ghost_forest(w):
        labs = [i for v in comp for i in t.labels_at(v)]
        if labs:
            keep.add(max(labs))
    return tuple(sorted(keep))


# ---------------------------------------------------------------- edge system

def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def solve_edge_system(t: LabelledTree, v_edge: Mapping, v_root: Sequence,
                      root: int | None = None):
    """Solve xi_a + eta_ab = v_ab, eta_ab = eta_ba, xi_root = v_root.

    Works outward from the root (default: the vertex of the smallest label)
    one edge at a time.  Exact when the inputs are Fractions or ints.
    Returns (xi by vertex, eta by sorted edge).
    """
    if root is None:
        root = t.labels[min(t.labels)] if t.labels else t.vertices[0]
    dim = len(v_root)
    for key, vec in v_edge.items():
        if len(vec) != dim:
            raise ValidationError(f"vector on {key} has dimension {len(vec)}, expected {dim}")
    for a, b in t.edges:
        if (a, b) not in v_edge or (b, a) not in v_edge:
            raise ValidationError(f"missing edge data for ({a},{b})")
    xi = {root: tuple(v_root)}
    eta = {}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b in t.neighbors(a):
            if b in xi:
                continue
            e = _sub(v_edge[(a, b)], xi[a])
            eta[(min(a, b), max(a, b))] = e
            xi[b] = _sub(v_edge[(b, a)], e)
            queue.append(b)
    return xi, dict(sorted(eta.items()))


def as_fraction_vector(vec) -> tuple:
    return tuple(Fraction(x) for x in vec)


def random_tree(rng, n_vertices: int, k: int, first_label: int = 1) -> LabelledTree:
    """Uniform random tree shape (Prüfer code) with labels dropped uniformly on vertices."""
    if n_vertices < 1:
        raise ValidationError("need at least one vertex")
    edges = []
    if n_vertices == 2:
        edges = [(0, 1)]
    elif n_vertices > 2:
        code = [int(x) for x in rng.integers(0, n_vertices, size=n_vertices - 2)]
        degree = [1] * n_vertices
        for x in code:
            degree[x] += 1
        for x in code:
            leaf = min(v for v in range(n_vertices) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(n_vertices) if degree[v] == 1]
        edges.append((u, w))
    labels = {i: int(rng.integers(0, n_vertices)) for i in range(first_label, first_label + k)}
    return LabelledTree(range(n_vertices), edges, labels)

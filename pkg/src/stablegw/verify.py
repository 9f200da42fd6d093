"""Seeded property suites.

Each suite returns a JSON-ready dict whose content depends only on the seed
and the sample counts, so reruns are byte-identical.  A check records the
number of trials, the number of violations, the largest residual seen and
the first few offending cases.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import coherent as coh
from . import donaldson as don
from . import hermitian as her
from . import intersections as ix
from .errors import ValidationError
from .nodal import (NodalCurve, StableDecomposition, cross_ratio_nodal, enumerate_decompositions,
                    is_refinement, nonrefinement_with_branch, normalize_component, random_curve,
                    random_points, smooth_curve, triple_type,
                    witness_refinement)
from .projective import ExtPoint, Mobius, chordal_distance, cross_ratio
from .trees import (LabelledTree, WeightedTree, enumerate_stable_trees, is_stable, random_tree,
                    solve_edge_system, stabilize, strata_counts, stratum_dim, weighted_stable)

MAX_EXAMPLES = 5
TYPE_RANK = {"I": 0, "II": 1, "III": 2}


class Check:
    def __init__(self):
        self.trials = 0
        self.violations = 0
        self.max_residual = 0.0
        self.examples = []
        self.info = {}

    def record(self, ok: bool, residual: float | None = None, example=None):
        self.trials += 1
        if residual is not None and math.isfinite(residual):
            self.max_residual = max(self.max_residual, float(residual))
        if not ok:
            self.violations += 1
            if example is not None and len(self.examples) < MAX_EXAMPLES:
                self.examples.append(example)

    def to_json(self):
        d = {"trials": self.trials, "violations": self.violations,
             "max_residual": float(self.max_residual), "examples": self.examples}
        if self.info:
            d["info"] = self.info
        return d


class Suite:
    def __init__(self, name: str, seed: int, **params):
        self.name, self.seed, self.params = name, seed, params
        self.checks: dict[str, Check] = {}
        self.refuted: dict[str, Check] = {}

    def check(self, name: str) -> Check:
        return self.checks.setdefault(name, Check())

    def refutation(self, name: str) -> Check:
        """A claim of the source that the implementation shows to be false.

        Its failures are reported but do not count as violations of the
        library's own guarantees.
        """
        return self.refuted.setdefault(name, Check())

    def to_json(self):
        total = sum(c.violations for c in self.checks.values())
        out = {"suite": self.name, "seed": self.seed, "params": self.params,
               "checks": {k: v.to_json() for k, v in sorted(self.checks.items())},
               "violations": total}
        if self.refuted:
            out["refuted_claims"] = {k: v.to_json() for k, v in sorted(self.refuted.items())}
        return out


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


# ---------------------------------------------------------------- trees

def suite_trees(seed: int, trials: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    s = Suite("trees", seed, trials=trials)
    known = {4: {0: 1, 1: 3}, 5: {0: 1, 1: 10, 2: 15}}
    ch = s.check("strata_counts")
    for k, want in known.items():
        got = strata_counts(k)
        ch.record(got == want, example={"k": k, "got": got})
    ch = s.check("stratum_dimension")
    for k in range(3, 7):
        for t in enumerate_stable_trees(k):
            d = stratum_dim(t)
            ch.record(d >= 0 and d + t.edge_count == k - 3, example=t.to_json())
    ch = s.check("stabilize_idempotent")
    for _ in range(trials):
        k = int(rng.integers(3, 8))
        t = random_tree(rng, int(rng.integers(1, 9)), k)
        st, tau = stabilize(t)
        st2, _ = stabilize(st)
        ok = is_stable(st) and st2 == st and all(tau(v) in st.vertices for v in t.vertices)
        ch.record(ok, example=t.to_json())
    ch = s.check("stable_implies_weighted_stable")
    unstable_but_weighted = 0
    stable_pool = [t for k in (3, 4, 5) for t in enumerate_stable_trees(k)]
    for i in range(trials):
        if i % 2:
            t = stable_pool[int(rng.integers(0, len(stable_pool)))]
        else:
            t = random_tree(rng, int(rng.integers(1, 7)), int(rng.integers(0, 6)))
        w = WeightedTree(t, {v: (int(rng.integers(0, 2)),) for v in t.vertices})
        if is_stable(t):
            ch.record(weighted_stable(w), example=t.to_json())
        elif weighted_stable(w):
            unstable_but_weighted += 1
    ch.info["weighted_stable_but_unstable"] = unstable_but_weighted
    ch = s.check("edge_system_exact")
    for _ in range(trials):
        nv = int(rng.integers(1, 21))
        t = random_tree(rng, nv, int(rng.integers(1, 5)))
        dim = int(rng.integers(1, 4))

        def vec():
            return tuple(Fraction(int(a), int(b)) for a, b in
                         zip(rng.integers(-20, 21, size=dim), rng.integers(1, 10, size=dim)))
        v_edge = {}
        for a, b in t.edges:
            v_edge[(a, b)], v_edge[(b, a)] = vec(), vec()
        root_vec = vec()
        xi, eta = solve_edge_system(t, v_edge, root_vec)
        root = t.labels[min(t.labels)]
        res = xi[root] == root_vec
        for (a, b), val in v_edge.items():
            e = eta[(min(a, b), max(a, b))]
            res = res and tuple(x + y for x, y in zip(xi[a], e)) == val
        ch.record(bool(res), example=t.to_json())
    return s.to_json()


# ---------------------------------------------------------------- cross ratios

def _random_mobius(rng) -> Mobius:
    while True:
        m = rng.normal(size=4) + 1j * rng.normal(size=4)
        if abs(m[0] * m[3] - m[1] * m[2]) > 0.1:
            return Mobius(*[complex(x) for x in m])


def _degeneration(rng, k: int, eps: float):
    """A smooth curve with a cluster of labels at scale eps and its nodal limit."""
    labels = list(range(k + 1))
    size = int(rng.integers(2, k))  # leaves at least two labels outside
    cluster = sorted(int(x) for x in rng.choice(labels, size=size, replace=False))
    outside = [i for i in labels if i not in cluster]
    base = random_points(rng, len(outside) + 1, 0.3)
    p, outer = base[0], base[1:]
    inner = random_points(rng, len(cluster), 0.3)
    smooth = {i: ExtPoint(z) for i, z in zip(outside, outer)}
    smooth.update({i: ExtPoint(p + eps * u) for i, u in zip(cluster, inner)})
    tree = LabelledTree([0, 1], [(0, 1)], {**{i: 0 for i in outside}, **{i: 1 for i in cluster}})
    nodal = NodalCurve(tree, {(0, 1): ExtPoint(p), (1, 0): ExtPoint.infinity(False)},
                       {**{i: ExtPoint(z) for i, z in zip(outside, outer)},
                        **{i: ExtPoint(u) for i, u in zip(cluster, inner)}})
    return smooth_curve(smooth), nodal


def suite_cross_ratio(seed: int, trials: int = 1000, paths: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    s = Suite("cross-ratio", seed, trials=trials, paths=paths)
    ch = s.check("mobius_invariance")
    for _ in range(trials):
        z = [ExtPoint(x) for x in random_points(rng, 4, 1e-2)]
        phi = _random_mobius(rng)
        a = cross_ratio(*z)
        b = cross_ratio(*[phi(p) for p in z])
        d = chordal_distance(a, b)
        ch.record(d < 1e-9, d, {"points": [_c(p.value()) for p in z]})
    ch = s.check("degenerate_pairs")
    expect = {(1, 2): "0", (0, 3): "0", (0, 1): "inf", (2, 3): "inf", (0, 2): "1", (1, 3): "1"}
    for _ in range(max(1, trials // 10)):
        base = random_points(rng, 4, 1e-2)
        for (i, j), want in expect.items():
            z = list(base)
            z[j] = z[i]
            w = cross_ratio(*[ExtPoint(x) for x in z])
            target = {"0": ExtPoint(0.0), "1": ExtPoint(1.0), "inf": ExtPoint.infinity(False)}[want]
            # continuity: a nearby smooth tuple is close to the snapped value
            z2 = list(base)
            z2[j] = z2[i] + 1e-9
            near = cross_ratio(*[ExtPoint(x) for x in z2])
            d = chordal_distance(near, target)
            ch.record(w.same(target, 1e-12) and d < 1e-6, d, {"pair": [i, j]})
    ch = s.check("nodal_limit")
    for _ in range(paths):
        k = int(rng.integers(4, 7))
        smooth, nodal = _degeneration(rng, k, 1e-9)
        for q in itertools.combinations(range(k + 1), 4):
            a = cross_ratio(*[smooth.marked_points[i] for i in q])
            b = cross_ratio_nodal(nodal, *q)
            d = chordal_distance(a, b)
            ch.record(d < 1e-6, d, {"labels": list(q)})
    ch = s.check("normalization_invariance")
    trees = [t for k in (4, 5, 6) for t in enumerate_stable_trees(k)]
    for _ in range(trials):
        t = trees[int(rng.integers(0, len(trees)))]
        c = random_curve(t, rng)
        v = t.vertices[int(rng.integers(0, len(t.vertices)))]
        c2 = normalize_component(c, v)
        q = sorted(int(x) for x in rng.choice(sorted(t.labels), size=4, replace=False))
        d = chordal_distance(cross_ratio_nodal(c, *q), cross_ratio_nodal(c2, *q))
        ch.record(d < 1e-9, d, {"tree": t.to_json(), "vertex": v, "labels": q})
    return s.to_json()


# ---------------------------------------------------------------- types

def suite_types(seed: int, k_max: int = 6) -> dict:
    s = Suite("types", seed, k_max=k_max)
    mono, wr, wn = s.check("monotonicity"), s.check("witness_refinement"), s.check("witness_nonrefinement")
    branches = {"B-proper": 0, "B-full": 0}
    for k in range(3, k_max + 1):
        decs = enumerate_decompositions(k)
        triples = list(itertools.combinations(range(1, k + 1), 3))
        types = {I: [TYPE_RANK[triple_type(I, t)] for t in triples] for I in decs}
        for I, J in itertools.product(decs, repeat=2):
            if is_refinement(J, I):
                ok = all(a >= b for a, b in zip(types[I], types[J]))
                mono.record(ok, example={"I": I.to_json(), "J": J.to_json()})
                if I != J:
                    t = witness_refinement(I, J)
                    wr.record(triple_type(J, t) == "I" and triple_type(I, t) == "II",
                              example={"I": I.to_json(), "J": J.to_json(), "triple": list(t)})
            elif I.size >= 4 and I != J:
                t, branch = nonrefinement_with_branch(I, J)
                branches[branch] += 1
                wn.record(triple_type(I, t) == "I" and triple_type(J, t) == "II",
                          example={"I": I.to_json(), "J": J.to_json(), "triple": list(t)})
    wn.info["branches"] = branches
    return s.to_json()


# ---------------------------------------------------------------- coherent maps

def _in_stratum_sample(J: StableDecomposition, centers: dict, rng, cutoff):
    """Block points near the profile center of J (if any) or random."""
    if J in centers and rng.random() < 0.7:
        r = float(rng.uniform(0, 0.03))
        return [z + r * complex(rng.normal(), rng.normal()) for z in centers[J]]
    return random_points(rng, J.size - 3, 1e-2) if J.size > 3 else []


def suite_coherent(seed: int, samples: int = 1000, k: int = 5, restriction: int | None = None) -> dict:
    """Conditions (a) and (b), disjoint supports and the restriction identity.

    Samples are spread evenly over all decompositions J: half lie on M_J,
    half are smooth curves clustered near M_J at a random scale.
    """
    rng = np.random.default_rng(seed)
    cutoff = coh.Cutoff()
    model, centers = coh.random_model(k, rng, cutoff)
    decs = enumerate_decompositions(k)
    s = Suite("coherent", seed, samples=samples, k=k)
    ca, cb, cd, cr = (s.check("condition_a"), s.check("condition_b"), s.check("disjoint_supports"),
                      s.check("restriction_identity"))
    cf = s.check("factor_in_unit_interval")
    rest_budget = samples // 2 if restriction is None else restriction
    near_counts = nonzero_F = 0
    for idx in range(samples):
        J = decs[idx % len(decs)]
        pts = _in_stratum_sample(J, centers, rng, cutoff)
        on = idx % 2 == 0
        try:
            if on:
                c = coh.curve_on_stratum(J, pts, rng)
            else:
                scale = float(10 ** rng.uniform(-6, -0.5))
                c = coh.clustered_smooth_curve(J, pts, scale, rng)
        except ValidationError:
            continue
        w = coh.CrossRatioCache(c)
        comps = {}
        for I in model.profiles:
            comps[I] = coh.extend(I, model.profiles[I], w, cutoff)
            f = coh.extension_factor(I, w, cutoff)
            cf.record(0 <= f <= 1, float(f))
        nonzero = [I for I, v in comps.items() if any(x != 0 for x in v)]
        cd.record(len(nonzero) <= 1, example={"curve": c.to_json(), "nonzero": [I.to_json() for I in nonzero]})
        F = [sum(v[i] for v in comps.values()) for i in range(model.dim)]
        nonzero_F += any(x != 0 for x in F)
        near = coh.near_minimal_strata(w, k, cutoff)
        if near:
            near_counts += 1
            ca.record(all(x == 0 for x in F), max(abs(x) for x in F), {"curve": c.to_json()})
        if on:
            # move every bubble; F must not change
            c2 = coh.curve_on_stratum(J, pts, rng)
            F2 = model(c2)
            d = max(abs(a - b) for a, b in zip(F, F2))
            cb.record(d <= 1e-10, d, {"J": J.to_json(), "points": [_c(z) for z in pts]})
            if J in model.profiles and cr.trials < rest_budget:
                lhs = comps[J]
                rhs = model.profiles[J](coh.p_coordinates(J, c))
                d = max(abs(a - b) for a, b in zip(lhs, rhs))
                cr.record(d <= 1e-12, d, {"J": J.to_json(), "points": [_c(z) for z in pts]})
    ca.info["near_minimal_samples"] = near_counts
    cd.info["nonzero_samples"] = nonzero_F
    return s.to_json()


def suite_restriction(seed: int, samples: int = 1000, k: int = 5) -> dict:
    """(E_I xi)|_{M_I} = xi o p_I at in-stratum samples, for every |I| >= 4."""
    rng = np.random.default_rng(seed)
    cutoff = coh.Cutoff()
    model, centers = coh.random_model(k, rng, cutoff)
    decs = sorted(model.profiles, key=lambda d: d.parts)
    s = Suite("restriction", seed, samples=samples, k=k)
    ch = s.check("restriction_identity")
    nonzero = 0
    for idx in range(samples):
        I = decs[idx % len(decs)]
        pts = _in_stratum_sample(I, centers, rng, cutoff)
        c = coh.curve_on_stratum(I, pts, rng)
        lhs = coh.extend(I, model.profiles[I], c, cutoff)
        rhs = model.profiles[I](coh.p_coordinates(I, c))
        nonzero += any(x != 0 for x in lhs)
        d = max(abs(a - b) for a, b in zip(lhs, rhs))
        ch.record(d <= 1e-12, d, {"I": I.to_json()})
    ch.info["nonzero_values"] = nonzero
    return s.to_json()


# ---------------------------------------------------------------- angles

def _rand_oriented(rng, n, m):
    return rng.normal(size=(2 * n, m))


def suite_angles(seed: int, trials: int = 1000) -> dict:
    rng = np.random.default_rng(seed)
    s = Suite("angles", seed, trials=trials)
    tol = 1e-8

    ch = s.check("angle_c_complements")
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        X = _rand_oriented(rng, n, int(rng.integers(1, 2 * n)))
        Y = _rand_oriented(rng, n, int(rng.integers(1, 2 * n)))
        J = her.standard_J(n)
        a = her.max_angle(X, Y)
        vals = [her.max_angle(J @ X, J @ Y), her.max_angle(her.perp(Y), her.perp(X)),
                her.max_angle(her.omega_complement(Y), her.omega_complement(X))]
        if X.shape[1] == Y.shape[1]:
            vals.append(her.max_angle(J @ Y, J @ X))
        d = max(abs(a - v) for v in vals)
        ch.record(d < tol, d, {"n": n, "dims": [X.shape[1], Y.shape[1]]})

    ch_d, ch_e = s.check("angle_d_kahler_vs_max_angle"), s.check("angle_e_kahler_invariance")
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        m = 2 if rng.random() < 0.5 else 2 * n - 2
        W = _rand_oriented(rng, n, m)
        J = her.standard_J(n)
        th = her.kahler_angle(W)
        d = max(abs(min(th, math.pi - th) - her.max_angle(W, J @ W)),
                abs(min(th, math.pi - th) - her.max_angle(J @ W, W)))
        ch_d.record(d < tol, d, {"n": n, "m": m})
        others = [her.kahler_angle(J @ W), her.kahler_angle(her.perp(W)),
                  her.kahler_angle(her.omega_complement(W))]
        d = max(abs(th - v) for v in others)
        ch_e.record(d < tol, d, {"n": n, "m": m})

    ch = s.check("kernel_angle_closed_form")
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        A = rng.normal(size=n) + 1j * rng.normal(size=n)
        B = (rng.normal(size=n) + 1j * rng.normal(size=n)) * float(rng.uniform(0, 2))
        try:
            a = her.kernel_angle(A, B)
        except ValidationError:
            continue
        if n == 1:
            continue  # the kernel is zero-dimensional
        b = her.kahler_angle(her.kernel_subspace(A, B))
        ch.record(abs(a - b) < tol, abs(a - b), {"A": [_c(x) for x in A], "B": [_c(x) for x in B]})

    ch = s.check("angle2_a_symplectic_subspaces")
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        sigma = her.standard_omega(n) + float(rng.uniform(0, 0.6)) * her.random_skew(n, rng) / (2 * n)
        g = her.taming_margin(sigma)[2]
        if g <= 0:
            continue
        W = her.near_complex_subspace(n, 2 * n - 2, rng, float(rng.uniform(0, 0.5)))
        th = her.kahler_angle(W)
        if not math.sin(th) < g or th >= math.pi / 2:
            continue
        ok = her.is_symplectic(W, sigma) and her.is_symplectic(her.perp(W), sigma)
        ch.record(ok, example={"n": n, "theta": th, "gamma": g})

    ch = s.check("angle2_b_taming_perturbation")
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        sigma = her.standard_omega(n) + float(rng.uniform(0, 0.8)) * her.random_skew(n, rng) / (2 * n)
        g = her.taming_margin(sigma)[2]
        if g <= 0:
            continue
        K = her.random_compatible(n, rng, float(rng.uniform(0, 0.3)))
        if her.op_norm(K - her.standard_J(n)) >= g:
            continue
        ch.record(her.tames(sigma, K), example={"n": n, "gamma": g})

    ch = s.check("angle3_a_min_angle_bound")
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        T = rng.normal(size=(int(rng.integers(1, 2 * n + 1)), 2 * n))
        W = _rand_oriented(rng, n, int(rng.integers(1, 2 * n + 1)))
        lhs, rhs = her.min_angle_bound(T, W)
        ch.record(lhs >= rhs - 1e-9, rhs - lhs, {"n": n})

    ch = s.check("codim2_construction")
    half = s.refutation("codim2_operator_norm_at_most_2sin_half_theta")
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        W = her.near_complex_subspace(n, 2 * n - 2, rng, float(rng.uniform(0, 0.3)))
        if her.kahler_angle(W) > math.pi / 2:
            W[:, 0] *= -1
        th = her.kahler_angle(W)
        K = her.construct_K_codim2(W)
        rep = her.codim2_report(W, K)
        ok = (rep["compatibility"] < 1e-10 and rep["invariance_W"] < 1e-10
              and rep["invariance_W_omega"] < 1e-10 and rep["frame_deviation"] <= 2 * math.sin(th / 2) + 1e-9)
        ch.record(ok, max(rep["compatibility"], rep["invariance_W"], rep["invariance_W_omega"]),
                  {"n": n, "theta": th})
        excess = rep["operator_norm"] - 2 * math.sin(th / 2)
        half.record(excess <= 1e-9, excess, {"n": n, "theta": th})
    return s.to_json()


# ---------------------------------------------------------------- taming

def suite_taming(seed: int, trials: int = 1000, mc_trials: int = 20, mc_samples: int = 20000) -> dict:
    rng = np.random.default_rng(seed)
    s = Suite("taming", seed, trials=trials, mc_trials=mc_trials, mc_samples=mc_samples)
    ch = s.check("gamma_of_plus_minus_omega")
    for n in range(1, 5):
        om = her.standard_omega(n)
        ch.record(her.taming_margin(om)[2] == 1.0 and her.taming_margin(-om)[2] == -1.0,
                  example={"n": n})

    def random_form(n):
        kind = rng.random()
        S = her.random_skew(n, rng)
        if kind < 0.4:
            return S
        sign = 1 if kind < 0.7 else -1
        return sign * her.standard_omega(n) * float(rng.uniform(0.5, 2)) + float(rng.uniform(0, 0.5)) * S / (2 * n)

    p1, p2, p3, p4 = (s.check("property1_one_sided"), s.check("property2_bounds"),
                      s.check("property3_sign_means_taming"), s.check("property4_scaling_and_sums"))
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        S = random_form(n)
        a, b, g = her.taming_margin(S)
        M = S @ her.standard_J(n)
        ev = np.linalg.eigvalsh((M + M.T) / 2)
        one_sided = (a > 0 and ev[0] > 0) or (a < 0 and ev[-1] < 0) or (a == 0 and ev[0] <= 0 <= ev[-1])
        p1.record(one_sided, example={"n": n})
        p2.record(b > 0 and abs(a) <= b * (1 + 1e-12) and abs(g) <= 1 + 1e-12, abs(g) - 1, {"n": n})
        J = her.standard_J(n)
        nondeg = np.linalg.svd(S, compute_uv=False).min() > 1e-12
        if g > 0:
            p3.record(nondeg and her.tames(S, J), example={"n": n})
        elif g < 0:
            p3.record(nondeg and her.tames(S, -J), example={"n": n})
        else:
            p3.record(not her.tames(S, J) and not her.tames(S, -J), example={"n": n})
        t = float(np.exp(rng.normal()))
        d = max(abs(her.taming_margin(t * S)[2] - g), abs(her.taming_margin(-S)[2] + g))
        S2 = random_form(n)
        g2 = her.taming_margin(S2)[2]
        ok = d < 1e-12
        if g > 0 and g2 > 0:
            ok = ok and her.taming_margin(S + S2)[2] >= min(g, g2) - 1e-12
        p4.record(ok, d, {"n": n})
    mc = s.check("monte_carlo_agreement")
    for i in range(mc_trials):
        n = int(rng.integers(1, 5))
        S = random_form(n)
        a, b, _ = her.taming_margin(S)
        am, bm = her.taming_margin_monte_carlo(S, mc_samples, seed * 1000 + i)
        d = max(abs(a - am), abs(b - bm)) / b
        mc.record(d < 1e-3, d, {"n": n})
    return s.to_json()


# ---------------------------------------------------------------- donaldson

def suite_donaldson(seed: int) -> dict:
    s = Suite("donaldson", seed)
    rep = don.threshold_sweep()
    ch = s.check("threshold_conditions")
    ch.trials, ch.violations = rep.cases, len(rep.counterexamples)
    ch.examples = rep.counterexamples[:MAX_EXAMPLES]
    rep = don.pair_sweep()
    ch = s.check("two_hypersurfaces_negative")
    ch.trials, ch.violations = rep.cases, len(rep.counterexamples)
    ch.examples = rep.counterexamples[:MAX_EXAMPLES]
    ch = s.check("bounded_classes_symmetric")
    for r in (1, 2, 3):
        for E in range(0, 4):
            w = [1 + j for j in range(r)]
            out = set(don.enumerate_bounded_classes(w, E, positive=False))
            ch.record(all(tuple(-a for a in A) in out for A in out), example={"rank": r, "E": E})
    return s.to_json()


# ---------------------------------------------------------------- intersections

def random_gaussian_poly(rng, degree: int, lo: int = -3, hi: int = 3, monic: bool = False) -> list:
    c = [[int(a), int(b)] for a, b in rng.integers(lo, hi + 1, size=(degree + 1, 2))]
    if monic or c[-1] == [0, 0]:
        c[-1] = [1, 0]
    return c


def suite_intersect(seed: int, maps: int | None = None, polys: int = 1000, jets: int | None = None) -> dict:
    """Map and jet counts default to a fifth and a tenth of the polynomial count."""
    maps = polys // 5 if maps is None else maps
    jets = polys // 10 if jets is None else jets
    rng = np.random.default_rng(seed)
    s = Suite("intersect", seed, maps=maps, polys=polys, jets=jets)
    ch = s.check("total_equals_degree_product")
    for _ in range(maps):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 6))
        D = int(rng.integers(1, 4))
        comps = [random_gaussian_poly(rng, d, monic=(j == 0)) for j in range(n + 1)]
        mons = [e for e in itertools.product(range(D + 1), repeat=n + 1) if sum(e) == D]
        terms = {e: [int(a), int(b)] for e in mons for a, b in [rng.integers(-3, 4, size=2)]}
        if not any(v != [0, 0] for v in terms.values()):
            terms[mons[0]] = [1, 0]
        try:
            cert = ix.total_intersection(comps, ix.Hypersurface(terms, n + 1))
        except ValidationError:
            continue
        ok = cert.total == cert.expected == cert.map_degree * D
        ch.record(ok, example=cert.to_json())
    ch = s.check("winding_equals_vanishing_order")
    for _ in range(polys):
        m = int(rng.integers(0, 6))
        rest = random_gaussian_poly(rng, int(rng.integers(0, 4)))
        z0 = complex(int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
        # h = (z - z0)^m * rest, with rest(z0) != 0 forced
        restp = ix.poly(rest)
        if ix.vanishing_order(restp, z0) > 0:
            restp = [restp[0] + 1] + restp[1:]
        h = [ix.QQi(1)]
        for _ in range(m):
            h = _poly_mul(h, [ix.QQi(-int(z0.real), -int(z0.imag)), ix.QQi(1)])
        h = _poly_mul(h, restp)
        order = ix.vanishing_order(h, [int(z0.real), int(z0.imag)])
        roots = [r for r in np.roots([complex(c) for c in reversed(restp)])] if len(restp) > 1 else []
        gap = min([abs(r - z0) for r in roots] + [1.0])
        r = gap / 2
        wnd = ix.local_intersection_winding(h, z0, r).value
        ch.record(order == m and wnd == m, abs(wnd - order), {"m": m, "z0": _c(z0)})
    ch = s.check("tangency_index_relation")
    for _ in range(polys // 10):
        n = int(rng.integers(2, 4))
        ell = int(rng.integers(1, 6))
        comps = [[0] + [[int(a), int(b)] for a, b in rng.integers(-3, 4, size=(ell + 1, 2))] for _ in range(n - 1)]
        normal = [0] * ell + [[int(rng.integers(1, 4)), int(rng.integers(-3, 4))]] + \
            [[int(a), int(b)] for a, b in rng.integers(-3, 4, size=(2, 2))]
        comps.append(normal)
        jet = ix.normal_jet(comps, n - 1, ell)
        order = ix.vanishing_order(comps[-1], 0)
        ch.record(jet.tangency_order == ell - 1 and order == jet.tangency_order + 1,
                  example={"ell": ell, "order": order})
    ch = s.check("jet_transformation_law")
    for _ in range(jets):
        n = int(rng.integers(2, 4))
        k = int(rng.integers(1, n))
        ell = int(rng.integers(1, 5))
        comps = []
        for j in range(n):
            c = list(rng.normal(size=ell + 2) + 1j * rng.normal(size=ell + 2))
            c[0] = 0
            if j >= k:
                for i in range(1, ell):
                    c[i] = 0
            comps.append([complex(x) for x in c])
        phi = ix.random_adapted_diffeo(n, k, rng)
        r = ix.jet_law_residual(comps, phi, k, ell)
        ch.record(r < 1e-8, r, {"n": n, "k": k, "ell": ell})
    return s.to_json()


def _poly_mul(a, b):
    out = [ix.QQi(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


SUITES = {
    "trees": suite_trees,
    "cross-ratio": suite_cross_ratio,
    "types": suite_types,
    "coherent": suite_coherent,
    "restriction": suite_restriction,
    "angles": suite_angles,
    "taming": suite_taming,
    "donaldson": suite_donaldson,
    "intersect": suite_intersect,
}

# sample-count keyword of each suite, set by --samples on the command line
SAMPLE_PARAM = {
    "trees": "trials",
    "cross-ratio": "trials",
    "coherent": "samples",
    "restriction": "samples",
    "angles": "trials",
    "taming": "trials",
    "intersect": "polys",
}


def run_suite(name: str, seed: int, samples: int | None = None) -> dict:
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    kwargs = {}
    if samples is not None and name in SAMPLE_PARAM:
        kwargs[SAMPLE_PARAM[name]] = int(samples)
    return SUITES[name](seed, **kwargs)

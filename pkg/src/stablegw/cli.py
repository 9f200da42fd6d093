"""Command line interface: JSON in, JSON out.

Exit codes: 0 success, 2 invalid input, 3 property violation, 64 usage error.
DM_SEED and DM_TOL override the default seed and tolerance.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import numpy as np

from . import concordance, donaldson, hermitian, intersections, nodal, trees, verify
from .coherent import Cutoff, Profile, extend
from .errors import PropertyViolation, ResourceError, ValidationError
from .projective import ExtPoint, cross_ratio

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION, EXIT_USAGE = 0, 2, 3, 64

EDGE_WORDS = ("zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten")


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tol: float = 1e-9
    samples: int | None = None
    fmt: str = "json"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, ExtPoint):
        return x.to_json()
    return x


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True)


def _table(doc, prefix="") -> list[str]:
    if isinstance(doc, dict):
        out = []
        for k in sorted(doc):
            out += _table(doc[k], f"{prefix}.{k}" if prefix else str(k))
        return out
    return [f"{prefix}\t{json.dumps(_jsonable(doc), sort_keys=True)}"]


def load_json(text: str):
    """Inline JSON, @path to a file, or - for stdin."""
    try:
        if text == "-":
            return json.load(sys.stdin)
        if text.startswith("@"):
            with open(text[1:], encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except OSError as exc:
        raise ValidationError(f"cannot read {text[1:]}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None


def schema(name: str) -> dict:
    path = resources.files("stablegw") / "schemas" / "v1" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


def validate(doc, name: str, output: bool = False):
    import jsonschema
    try:
        jsonschema.validate(_jsonable(doc), schema(name))
    except jsonschema.ValidationError as exc:
        if output:
            raise PropertyViolation(f"output does not match schema {name}: {exc.message}") from None
        raise ValidationError(f"input does not match schema {name}: {exc.message}") from None
    return doc


def _matrix(text: str, name: str) -> np.ndarray:
    M = np.asarray(load_json(text), dtype=float)
    if M.ndim != 2:
        raise ValidationError(f"{name} must be a matrix")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    return M


def _basis(text: str, name: str) -> np.ndarray:
    """A list of vectors, returned as the columns of a matrix."""
    return _matrix(text, name).T


def _complex_row(text: str, name: str) -> np.ndarray:
    vals = load_json(text)
    if not isinstance(vals, list):
        raise ValidationError(f"{name} must be a list")
    return np.array([complex(intersections.coefficient(v)) for v in vals], dtype=complex)


def _tree(text: str) -> trees.LabelledTree:
    return trees.LabelledTree.from_json(validate(load_json(text), "tree"))


def _weighted(text: str, omega: str | None) -> trees.WeightedTree:
    doc = validate(load_json(text), "tree")
    t = trees.LabelledTree.from_json(doc)
    if "weights" not in doc:
        raise ValidationError("a weighted tree needs a 'weights' field")
    w = {int(v): tuple(int(x) for x in ws) for v, ws in doc["weights"].items()}
    row = tuple(int(x) for x in load_json(omega)) if omega else ()
    return trees.WeightedTree(t, w, row)


def _curve(text: str, cfg: RunConfig) -> nodal.NodalCurve:
    return nodal.NodalCurve.from_json(validate(load_json(text), "curve"), tol=cfg.tol)


def _decomposition(text: str) -> nodal.StableDecomposition:
    parts = load_json(text)
    if not isinstance(parts, list) or not all(isinstance(p, list) for p in parts):
        raise ValidationError("a decomposition is a list of lists of labels")
    return nodal.StableDecomposition.of(parts)


def _point(text: str) -> ExtPoint:
    return ExtPoint.of(load_json(text) if text.strip().lower() not in ("inf", "infinity") else "inf")


# ---------------------------------------------------------------- tree / dm

def cmd_tree(args, cfg):
    op = args.op
    if op == "is-stable":
        t = _tree(args.tree)
        return {"stable": trees.is_stable(t),
                "special_counts": {str(v): t.special_count(v) for v in t.vertices}}
    if op == "stabilize":
        s, tau = trees.stabilize(_tree(args.tree))
        return {"tree": s.to_json(), "vertex_map": {str(v): w for v, w in sorted(tau.vertex_map.items())},
                "collapsed": list(tau.collapsed)}
    if op == "canonical":
        return {"canonical_form": trees.canonical_form(_tree(args.tree))}
    if op == "dim":
        t = _tree(args.tree)
        return {"stratum_dim": trees.stratum_dim(t), "codim": t.edge_count}
    if op == "ghosts":
        w = _weighted(args.tree, args.omega)
        return {"ghost_forest": [list(g) for g in trees.ghost_forest(w)],
                "reduced_index_set": list(trees.reduced_index_set(w)),
                "weighted_stable": trees.weighted_stable(w)}
    if op == "solve-edges":
        t = _tree(args.tree)
        data = load_json(args.data)
        try:
            v_edge = {}
            for key, vec in data["v_edge"].items():
                a, b = (int(x) for x in key.split(","))
                v_edge[(a, b)] = tuple(Fraction(str(x)) for x in vec)
            v_root = tuple(Fraction(str(x)) for x in data["v_root"])
        except (KeyError, ValueError, TypeError, AttributeError) as exc:
            raise ValidationError(f"bad edge-system document: {exc}") from None
        xi, eta = trees.solve_edge_system(t, v_edge, v_root, data.get("root"))
        return {"xi": {str(v): list(x) for v, x in sorted(xi.items())},
                "eta": {f"{a},{b}": list(x) for (a, b), x in sorted(eta.items())}}
    raise UsageError(op)


def _edge_word(e: int) -> str:
    return f"{EDGE_WORDS[e]}_edge" if e < len(EDGE_WORDS) else f"e{e}_edge"


def cmd_dm(args, cfg):
    if args.op == "strata":
        counts = trees.strata_counts(args.k, bound=args.bound)
        doc = {_edge_word(e): c for e, c in counts.items() if e >= 1}
        return validate(doc, "strata", output=True)
    if args.op == "enumerate":
        ts = trees.enumerate_stable_trees(args.k, max_edges=args.max_edges, bound=args.bound)
        return {"k": args.k, "count": len(ts),
                "trees": [dict(t.to_json(), canonical_form=trees.canonical_form(t),
                               stratum_dim=trees.stratum_dim(t)) for t in ts]}
    if args.op == "dims":
        return {"moduli_dim": trees.moduli_dim(args.n, args.k, args.c1_a, args.edges),
                "tangency_moduli_dim": trees.tangency_moduli_dim(
                    args.n, args.c1_a, args.k, [tuple(c) for c in load_json(args.constraints)])}
    raise UsageError(args.op)


# ---------------------------------------------------------------- cross ratios

def cmd_cross_ratio(args, cfg):
    if args.op == "points":
        pts = [_point(p) for p in args.points]
        return {"value": cross_ratio(*pts, tol=cfg.tol)}
    c = _curve(args.curve, cfg)
    if args.op == "nodal":
        return {"value": nodal.cross_ratio_nodal(c, *args.labels)}
    if args.op == "decompose":
        I = nodal.stable_decomposition(c)
        return {"decomposition": I.to_json(), "size": I.size}
    if args.op == "normalize":
        return {"curve": nodal.normalize_component(c, args.vertex).to_json()}
    raise UsageError(args.op)


def cmd_types(args, cfg):
    I = _decomposition(args.decomposition)
    if args.op == "type":
        return {"type": nodal.triple_type(I, args.triple)}
    J = _decomposition(args.other)
    if args.op == "refines":
        return {"refines": nodal.is_refinement(J, I)}
    if args.op == "witness":
        if nodal.is_refinement(J, I):
            t = nodal.witness_refinement(I, J)
            return {"case": "refinement", "triple": list(t),
                    "type_under_I": nodal.triple_type(I, t), "type_under_J": nodal.triple_type(J, t)}
        t, branch = nodal.nonrefinement_with_branch(I, J)
        return {"case": "nonrefinement", "branch": branch, "triple": list(t),
                "type_under_I": nodal.triple_type(I, t), "type_under_J": nodal.triple_type(J, t)}
    raise UsageError(args.op)


# ---------------------------------------------------------------- coherent maps

def cmd_coherent(args, cfg):
    if args.op == "eval":
        I = _decomposition(args.decomposition)
        xi = Profile.from_json(load_json(args.profile))
        c = _curve(args.curve, cfg)
        cutoff = Cutoff(Fraction(args.radius))
        return {"value": [float(v) if isinstance(v, float) else v for v in extend(I, xi, c, cutoff)]}
    if args.op == "check":
        samples = args.samples if args.samples is not None else (cfg.samples or 1000)
        doc = verify.suite_coherent(cfg.seed, samples=samples, k=args.k)
        return validate(doc, "verify_report", output=True)
    raise UsageError(args.op)


# ---------------------------------------------------------------- angles

def cmd_angle(args, cfg):
    op = args.op
    if op == "kahler":
        W = _basis(args.subspace, "subspace")
        return {"theta": hermitian.kahler_angle(W, args.orientation)}
    if op in ("max", "min"):
        X, Y = _basis(args.x, "x"), _basis(args.y, "y")
        f = hermitian.max_angle if op == "max" else hermitian.min_angle
        return {"angle": f(X, Y)}
    if op == "gamma":
        a, b, g = hermitian.taming_margin(_matrix(args.form, "form"))
        return {"alpha": a, "beta": b, "gamma": g, "tames": g > 0}
    if op == "kernel":
        A, B = _complex_row(args.a, "a"), _complex_row(args.b, "b")
        theta = hermitian.kernel_angle(A, B)
        direct = hermitian.kahler_angle(hermitian.kernel_subspace(A, B))
        return {"theta": theta, "direct": direct}
    if op == "construct-k":
        W = _basis(args.subspace, "subspace")
        if args.second is None:
            K = hermitian.construct_K_codim2(W)
            rep = hermitian.codim2_report(W, K)
            return {"K": K, "theta": hermitian.kahler_angle(W), "report": rep}
        rep = hermitian.construct_K_pair(W, _basis(args.second, "second"), args.eps, args.theta3)
        return {"K": rep.K, "distance_to_J": rep.distance_to_J, "residuals": rep.residuals,
                "diagnostics": rep.diagnostics}
    if op == "path":
        K = hermitian.canonical_path(_matrix(args.j0, "j0"), _matrix(args.j1, "j1"), args.t)
        return {"K": K, "compatible": hermitian.is_compatible(K, max(cfg.tol, 1e-9))}
    if op == "min-bound":
        lhs, rhs = hermitian.min_angle_bound(_matrix(args.t_map, "map"), _basis(args.subspace, "subspace"))
        return {"angle": lhs, "bound": rhs, "holds": lhs >= rhs - cfg.tol}
    raise UsageError(op)


# ---------------------------------------------------------------- donaldson

def cmd_donaldson(args, cfg):
    if args.op == "bounds":
        if args.d is None and (args.d0 is None or args.d1 is None):
            raise ValidationError("give --d, or both --d0 and --d1")
        spec = donaldson.DonaldsonSpec(args.n, args.theta0, args.alpha_norm, args.omega_a, args.c1_a,
                                       D=args.d, D0=args.d0, D1=args.d1, family_k=args.family_k)
        return validate(donaldson.bounds_verdict(spec), "donaldson_bounds", output=True)
    if args.op == "classes":
        cls = donaldson.enumerate_bounded_classes(load_json(args.omega), args.energy, args.box,
                                                  positive=not args.signed)
        return {"count": len(cls), "classes": [list(c) for c in cls]}
    if args.op == "normalization":
        c, f = donaldson.gw_normalization(args.l0, args.l1)
        return {"coefficient": c, "l1_factorial": f}
    if args.op == "sweep":
        rep = donaldson.threshold_sweep()
        pair = donaldson.pair_sweep()
        return {"threshold": rep.to_json(), "pairs": pair.to_json()}
    raise UsageError(args.op)


# ---------------------------------------------------------------- intersections

def cmd_intersect(args, cfg):
    if args.op == "local":
        p = load_json(args.poly)
        z0 = load_json(args.z0)
        order = intersections.vanishing_order(p, z0)
        out = {"vanishing_order": order}
        if args.radius is not None:
            out["winding"] = intersections.local_intersection_winding(p, z0, args.radius).to_json()
        return out
    if args.op == "total":
        Y = intersections.Hypersurface.from_json(load_json(args.hypersurface))
        return intersections.total_intersection(load_json(args.components), Y).to_json()
    if args.op == "jet":
        return intersections.normal_jet(load_json(args.components), args.k, args.ell).to_json()
    raise UsageError(args.op)


# ---------------------------------------------------------------- verify / concordance

def cmd_verify(args, cfg):
    samples = args.samples if args.samples is not None else cfg.samples
    doc = verify.run_suite(args.suite, cfg.seed, samples)
    return validate(doc, "verify_report", output=True)


def cmd_concordance(args, cfg):
    return validate(concordance.concordance_report(), "concordance", output=True)


# ---------------------------------------------------------------- parser

def _env_seed() -> int:
    raw = os.environ.get("DM_SEED")
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise ValidationError(f"DM_SEED={raw!r} is not an integer") from None
    if not 0 <= seed < 2 ** 64:
        raise ValidationError("DM_SEED must fit in an unsigned 64-bit integer")
    return seed


def _env_tol() -> float:
    raw = os.environ.get("DM_TOL")
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise ValidationError(f"DM_TOL={raw!r} is not a number") from None
    if not (math.isfinite(tol) and tol > 0):
        raise ValidationError("DM_TOL must be a positive finite number")
    return tol


def _global_options(p: argparse.ArgumentParser, default):
    p.add_argument("--seed", type=int, default=default, help="random seed (default $DM_SEED or 0)")
    p.add_argument("--tol", type=float, default=default, help="numeric tolerance (default $DM_TOL or 1e-9)")
    p.add_argument("--format", choices=("json", "table"), default=default)


def _subcommands(p: argparse.ArgumentParser, common: argparse.ArgumentParser, dest: str):
    # global options are accepted after any subcommand as well
    sp = p.add_subparsers(dest=dest, required=True, parser_class=_Parser)
    plain = sp.add_parser
    sp.add_parser = lambda name, **kw: plain(name, parents=[common], **kw)
    return sp


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stablegw", description="Stable trees, nodal curves, Kähler angles, "
                "Donaldson degree arithmetic and local intersection numbers.")
    _global_options(p, None)
    common = _Parser(add_help=False)
    _global_options(common, argparse.SUPPRESS)
    sub = _subcommands(p, common, "command")

    t = _subcommands(sub.add_parser("tree", help="labelled trees"), common, "op")
    for name in ("is-stable", "stabilize", "canonical", "dim"):
        t.add_parser(name).add_argument("--tree", required=True, help="tree JSON, @file or -")
    g = t.add_parser("ghosts")
    g.add_argument("--tree", required=True, help="tree JSON with 'weights'")
    g.add_argument("--omega", help="pairing row of omega, JSON list")
    s = t.add_parser("solve-edges")
    s.add_argument("--tree", required=True)
    s.add_argument("--data", required=True, help='{"v_edge": {"a,b": [..]}, "v_root": [..], "root": id?}')

    d = _subcommands(sub.add_parser("dm", help="Deligne-Mumford strata"), common, "op")
    for name in ("strata", "enumerate"):
        q = d.add_parser(name)
        q.add_argument("--k", type=int, required=True)
        q.add_argument("--bound", type=int, default=trees.DEFAULT_ENUMERATION_BOUND)
        if name == "enumerate":
            q.add_argument("--max-edges", type=int)
    q = d.add_parser("dims")
    for name in ("--n", "--k", "--c1-a", "--edges"):
        q.add_argument(name, type=int, required=True)
    q.add_argument("--constraints", default="[]", help="JSON list of [codim, order] pairs")

    c = _subcommands(sub.add_parser("cross-ratio", help="cross ratios and decompositions"), common, "op")
    q = c.add_parser("points")
    q.add_argument("points", nargs=4, help='points as JSON numbers, [re, im] or "inf"')
    q = c.add_parser("nodal")
    q.add_argument("--curve", required=True)
    q.add_argument("--labels", type=int, nargs=4, required=True)
    c.add_parser("decompose").add_argument("--curve", required=True)
    q = c.add_parser("normalize")
    q.add_argument("--curve", required=True)
    q.add_argument("--vertex", type=int, required=True)

    ty = _subcommands(sub.add_parser("types", help="triple types and witnesses"), common, "op")
    q = ty.add_parser("type")
    q.add_argument("--decomposition", required=True)
    q.add_argument("--triple", type=int, nargs=3, required=True)
    for name in ("refines", "witness"):
        q = ty.add_parser(name)
        q.add_argument("--decomposition", required=True, help="I")
        q.add_argument("--other", required=True, help="J")

    co = _subcommands(sub.add_parser("coherent", help="coherent maps"), common, "op")
    q = co.add_parser("eval")
    q.add_argument("--decomposition", required=True)
    q.add_argument("--profile", required=True)
    q.add_argument("--curve", required=True)
    q.add_argument("--radius", default="1/10")
    q = co.add_parser("check")
    q.add_argument("--k", type=int, default=5)
    q.add_argument("--samples", type=int)

    a = _subcommands(sub.add_parser("angle", help="Kähler angles and compatible structures"), common, "op")
    q = a.add_parser("kahler")
    q.add_argument("--subspace", required=True, help="JSON list of spanning vectors")
    q.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    for name in ("max", "min"):
        q = a.add_parser(name)
        q.add_argument("--x", required=True)
        q.add_argument("--y", required=True)
    a.add_parser("gamma").add_argument("--form", required=True, help="skew matrix JSON")
    q = a.add_parser("kernel")
    q.add_argument("--a", required=True, help="complex-linear row")
    q.add_argument("--b", required=True, help="antilinear row")
    q = a.add_parser("construct-k")
    q.add_argument("--subspace", required=True)
    q.add_argument("--second", help="second codimension-2 subspace")
    q.add_argument("--eps", type=float, default=0.1)
    q.add_argument("--theta3", type=float, default=0.5)
    q = a.add_parser("path")
    q.add_argument("--j0", required=True)
    q.add_argument("--j1", required=True)
    q.add_argument("--t", type=float, required=True)
    q = a.add_parser("min-bound")
    q.add_argument("--map", dest="t_map", required=True, help="matrix of T")
    q.add_argument("--subspace", required=True)

    dn = _subcommands(sub.add_parser("donaldson", help="degree and index arithmetic"), common, "op")
    q = dn.add_parser("bounds")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--theta0", required=True)
    q.add_argument("--alpha-norm", required=True)
    q.add_argument("--d", type=int)
    q.add_argument("--d0", type=int)
    q.add_argument("--d1", type=int)
    q.add_argument("--omega-a", type=int, required=True)
    q.add_argument("--c1-a", type=int, required=True)
    q.add_argument("--family-k", type=int, default=0)
    q = dn.add_parser("classes")
    q.add_argument("--omega", required=True, help="JSON list")
    q.add_argument("--energy", type=int, required=True)
    q.add_argument("--box", type=int)
    q.add_argument("--signed", action="store_true", help="bound |omega(A)| instead of 0 <= omega(A)")
    q = dn.add_parser("normalization")
    q.add_argument("--l0", type=int, required=True)
    q.add_argument("--l1", type=int, required=True)
    dn.add_parser("sweep")

    ix = _subcommands(sub.add_parser("intersect", help="local and global intersection numbers"), common, "op")
    q = ix.add_parser("local")
    q.add_argument("--poly", required=True, help="coefficients, constant term first")
    q.add_argument("--z0", default="0")
    q.add_argument("--radius", type=float)
    q = ix.add_parser("total")
    q.add_argument("--components", required=True)
    q.add_argument("--hypersurface", required=True)
    q = ix.add_parser("jet")
    q.add_argument("--components", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--ell", type=int, required=True)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    v.add_argument("--samples", type=int)

    sub.add_parser("concordance", help="operation-to-test coverage map")
    return p


COMMANDS = {
    "tree": cmd_tree,
    "dm": cmd_dm,
    "cross-ratio": cmd_cross_ratio,
    "types": cmd_types,
    "coherent": cmd_coherent,
    "angle": cmd_angle,
    "donaldson": cmd_donaldson,
    "intersect": cmd_intersect,
    "verify": cmd_verify,
    "concordance": cmd_concordance,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stdout(stdout):
            args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        cfg = RunConfig(
            seed=args.seed if args.seed is not None else _env_seed(),
            tol=args.tol if args.tol is not None else _env_tol(),
            fmt=args.format or "json",
        )
        doc = COMMANDS[args.command](args, cfg)
    except PropertyViolation as exc:
        stderr.write(f"property violation: {exc}\n")
        return EXIT_VIOLATION
    except (ValidationError, ResourceError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    if cfg.fmt == "table":
        stdout.write("\n".join(_table(_jsonable(doc))) + "\n")
    else:
        stdout.write(dumps(doc) + "\n")
    if isinstance(doc, dict) and doc.get("violations"):
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))

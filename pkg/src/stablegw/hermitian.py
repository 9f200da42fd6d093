"""Linear algebra on standard Hermitian space R^{2n} = C^n.

Coordinates are (x_1, y_1, ..., x_n, y_n) with z_k = x_k + i y_k, so J is
multiplication by i, omega(u, v) = <Ju, v> and g = omega(., J.) is the dot
product.  Subspaces are 2n x m matrices whose columns span them; the column
order gives the orientation.  Norms of operators are g-operator norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

TOL = 1e-9


class ConstructionError(ValidationError):
    """A construction degenerated numerically."""


def standard_J(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def standard_omega(n: int) -> np.ndarray:
    """Matrix of omega: omega(u, v) = u @ Omega @ v."""
    return -standard_J(n)


def _dim(M: np.ndarray) -> int:
    if M.ndim != 2 or M.shape[0] % 2:
        raise ValidationError("expected a matrix with an even number of rows")
    return M.shape[0] // 2


# ---------------------------------------------------------------- subspaces

def orth(X: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the column span (unoriented)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] == 0:
        return X
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return U[:, :r]


def oriented_orthonormal(X: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis with the orientation of the given columns."""
    X = np.asarray(X, dtype=float)
    Q, R = np.linalg.qr(X)
    d = np.diag(R)
    if np.min(np.abs(d)) <= tol * max(1.0, np.max(np.abs(d))):
        raise ValidationError("rank-deficient basis")
    return Q * np.sign(d)


def null_space(A: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    A = np.atleast_2d(A)
    _, s, Vt = np.linalg.svd(A)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return Vt[r:].T


def perp(X: np.ndarray) -> np.ndarray:
    """Orthogonal complement, oriented so that (X, X^perp) is positive."""
    Q = oriented_orthonormal(X)
    N = null_space(Q.T)
    if N.shape[1] and np.linalg.det(np.hstack([Q, N])) < 0:
        N[:, 0] *= -1
    return N


def omega_complement(X: np.ndarray) -> np.ndarray:
    """W^omega = (JW)^perp = J(W^perp), oriented as J applied to W^perp."""
    J = standard_J(_dim(X))
    return J @ perp(X)


def intersect(X: np.ndarray, Y: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    Qx, Qy = orth(X), orth(Y)
    N = null_space(np.hstack([Qx, -Qy]), tol)
    if N.shape[1] == 0:
        return np.zeros((X.shape[0], 0))
    return orth(Qx @ N[: Qx.shape[1]])


def complement_within(X: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the part of X orthogonal to S."""
    Qx = orth(X)
    if S.shape[1] == 0:
        return Qx
    Qs = orth(S)
    return orth(Qx - Qs @ (Qs.T @ Qx))


def omega_form(X: np.ndarray) -> np.ndarray:
    n = _dim(X)
    return X.T @ standard_omega(n) @ X


def is_symplectic(X: np.ndarray, form: np.ndarray | None = None, tol: float = 1e-9) -> bool:
    Q = orth(X)
    S = standard_omega(_dim(X)) if form is None else form
    M = Q.T @ S @ Q
    if M.shape[0] % 2:
        return False
    return np.linalg.svd(M, compute_uv=False).min() > tol


# ---------------------------------------------------------------- Kähler angle

def pfaffian(A: np.ndarray) -> float:
    m = A.shape[0]
    if m == 0:
        return 1.0
    if m % 2:
        return 0.0
    total = 0.0
    for j in range(1, m):
        if A[0, j] == 0:
            continue
        keep = [x for x in range(m) if x not in (0, j)]
        total += (-1) ** (j + 1) * A[0, j] * pfaffian(A[np.ix_(keep, keep)])
    return total


def _plane_angle(Q: np.ndarray) -> float:
    """Kähler angle of an oriented orthonormal 2-frame (x, y)."""
    x, y = Q[:, 0], Q[:, 1]
    Jx = standard_J(_dim(Q)) @ x
    cos = float(Jx @ y)
    sin = float(np.linalg.norm(Jx - Q @ (Q.T @ Jx)))
    return math.atan2(sin, cos)


def kahler_angle(W: np.ndarray, orientation: int = 1) -> float:
    """theta(W) in [0, pi]: arccos of omega^k|W / (k! vol_W).

    Planes use an atan2 form that stays accurate near 0 and pi; subspaces of
    dimension 2n-2 are measured on their oriented orthogonal complement.
    """
    W = np.asarray(W, dtype=float)
    n = _dim(W)
    m = W.shape[1]
    if m % 2 or m == 0:
        raise ValidationError("Kähler angle needs a nonzero even dimension")
    Q = oriented_orthonormal(W)
    if orientation < 0:
        Q = Q.copy()
        Q[:, 0] *= -1
    if m == 2:
        return _plane_angle(Q)
    if m == 2 * n - 2:
        return _plane_angle(perp(Q))
    c = pfaffian(Q.T @ standard_omega(n) @ Q)
    return math.acos(max(-1.0, min(1.0, c)))


# ---------------------------------------------------------------- angles between subspaces

def max_angle(X: np.ndarray, Y: np.ndarray) -> float:
    """sup over y in Y of the angle between y and X, in [0, pi/2]."""
    Qx, Qy = orth(X), orth(Y)
    if Qx.shape[1] == 0 or Qy.shape[1] == 0:
        raise ValidationError("angles need nonzero subspaces")
    if Qy.shape[1] > Qx.shape[1]:
        return math.pi / 2
    cos = np.linalg.svd(Qx.T @ Qy, compute_uv=False).min()
    sin = np.linalg.svd(Qy - Qx @ (Qx.T @ Qy), compute_uv=False).max()
    return math.atan2(sin, cos)


def is_transverse(X: np.ndarray, Y: np.ndarray) -> bool:
    return orth(np.hstack([orth(X), orth(Y)])).shape[1] == X.shape[0]


def min_angle(X: np.ndarray, Y: np.ndarray) -> float:
    """0 unless X + Y is everything; then the smallest angle between the
    orthogonal complements of X cap Y inside X and inside Y."""
    Qx, Qy = orth(X), orth(Y)
    if Qx.shape[1] == 0 or Qy.shape[1] == 0:
        raise ValidationError("angles need nonzero subspaces")
    if not is_transverse(Qx, Qy):
        return 0.0
    S = intersect(Qx, Qy)
    Xp, Yp = complement_within(Qx, S), complement_within(Qy, S)
    if Xp.shape[1] == 0 or Yp.shape[1] == 0:
        return math.pi / 2
    cos = np.linalg.svd(Xp.T @ Yp, compute_uv=False).max()
    sin = np.linalg.svd(Yp - Xp @ (Xp.T @ Yp), compute_uv=False).min()
    return math.atan2(sin, cos)


# ---------------------------------------------------------------- kernel angle

def real_matrix_of(A, B) -> np.ndarray:
    """2 x 2n real matrix of z -> sum A_k z_k + B_k conj(z_k)."""
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    n = A.size
    R = np.zeros((2, 2 * n))
    R[0, 0::2] = A.real + B.real
    R[0, 1::2] = -A.imag + B.imag
    R[1, 0::2] = A.imag + B.imag
    R[1, 1::2] = A.real - B.real
    return R


def _check_surjective(A, B):
    s = np.linalg.svd(real_matrix_of(A, B), compute_uv=False)
    if s.min() <= TOL * max(1.0, s.max()):
        raise ValidationError("A + B is not onto C")


def kernel_angle(A, B) -> float:
    """Kähler angle of ker(A+B) for A complex linear and B antilinear.

    A and B are coefficient rows: (A+B)z = sum A_k z_k + B_k conj(z_k).  The
    kernel is oriented by pulling back the complex orientation of C along
    A+B.  Closed form with atan2 so |B| > |A| lands in (pi/2, pi].
    """
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValidationError("A and B must have the same length")
    _check_surjective(A, B)
    a2, b2 = float(np.vdot(A, A).real), float(np.vdot(B, B).real)
    pair = abs(np.sum(A * B))
    return math.atan2(2.0 * math.sqrt(max(0.0, a2 * b2 - pair * pair)), a2 - b2)


def kernel_subspace(A, B) -> np.ndarray:
    """Oriented basis of ker(A+B) (columns), orientation as in kernel_angle."""
    _check_surjective(A, B)
    R = real_matrix_of(A, B)
    K = null_space(R)
    N = R.T  # R N = R R^T has positive determinant
    if np.linalg.det(np.hstack([K, N])) < 0:
        K[:, 0] *= -1
    return K


# ---------------------------------------------------------------- taming margins

def _check_skew(S: np.ndarray):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise ValidationError("a skew form is a square matrix of even size")
    if np.max(np.abs(S + S.T)) > TOL * max(1.0, np.max(np.abs(S))):
        raise ValidationError("form is not antisymmetric")
    return S


def taming_margin(sigma: np.ndarray) -> tuple[float, float, float]:
    """(alpha, beta, gamma) of a skew form relative to the standard J."""
    S = _check_skew(sigma)
    if not np.any(S):
        raise ValidationError("sigma = 0 has no taming margin")
    J = standard_J(_dim(S))
    SJ = S @ J
    M = (SJ + SJ.T) / 2
    ev = np.linalg.eigvalsh(M)
    if ev[0] > 0:
        alpha = float(ev[0])
    elif ev[-1] < 0:
        alpha = float(ev[-1])
    else:
        alpha = 0.0
    beta = float(np.linalg.svd(S, compute_uv=False)[0])
    return alpha, beta, alpha / beta


def taming_margin_monte_carlo(sigma: np.ndarray, samples: int, seed: int,
                              refine_steps: int = 400) -> tuple[float, float]:
    """Sphere-sampling estimates of alpha and beta.

    alpha follows the definition literally: the smallest positive value of
    sigma(x, Jx) minus the smallest positive value of -sigma(x, Jx) over unit
    x.  beta is the largest |Sx|, the supremum over the second vector being
    explicit.  The best samples are polished by a shrinking random search.
    """
    S = _check_skew(sigma)
    rng = np.random.default_rng(seed)
    m = S.shape[0]
    SJ = S @ standard_J(_dim(S))

    def unit(X):
        return X / np.linalg.norm(X, axis=-1, keepdims=True)

    def q(X):
        return np.einsum("...j,jk,...k->...", X, SJ, X)

    X = unit(rng.normal(size=(samples, m)))
    vals = q(X)

    def polish(x, score):
        # score: larger is better, -inf outside the admissible region
        best = score(x)
        step = 0.3
        for _ in range(refine_steps):
            cand = unit(x + step * rng.normal(size=(16, m)))
            s = np.array([score(c) for c in cand])
            i = int(np.argmax(s))
            if s[i] > best:
                x, best = cand[i], s[i]
            else:
                step *= 0.7
                if step < 1e-9:
                    break
        return best

    def smallest(sign):
        mask = sign * vals > 0
        if not mask.any():
            return 0.0
        idx = np.flatnonzero(mask)
        x = X[idx[np.argmin(sign * vals[idx])]]
        return -polish(x, lambda y: -(sign * q(y)) if sign * q(y) > 0 else -np.inf)

    alpha = smallest(1) - smallest(-1)
    norms = np.linalg.norm(X @ S.T, axis=1)
    beta = polish(X[int(np.argmax(norms))], lambda y: float(np.linalg.norm(S @ y)))
    return float(alpha), float(beta)


def is_almost_complex(K: np.ndarray, tol: float = TOL) -> bool:
    K = np.asarray(K, dtype=float)
    return np.max(np.abs(K @ K + np.eye(K.shape[0]))) <= tol


def tames(sigma: np.ndarray, K: np.ndarray) -> bool:
    S = _check_skew(sigma)
    K = np.asarray(K, dtype=float)
    if K.shape != S.shape or not is_almost_complex(K, 1e-8):
        raise ValidationError("K is not an almost complex structure")
    SK = S @ K
    return bool(np.linalg.eigvalsh((SK + SK.T) / 2)[0] > 0)


def compatibility_residual(K: np.ndarray) -> float:
    """max of |K^2 + 1| and |K^T Omega K - Omega|; positivity checked separately."""
    n = _dim(K)
    Om = standard_omega(n)
    return float(max(np.max(np.abs(K @ K + np.eye(2 * n))), np.max(np.abs(K.T @ Om @ K - Om))))


def is_compatible(K: np.ndarray, tol: float = 1e-9) -> bool:
    n = _dim(K)
    if compatibility_residual(K) > tol:
        return False
    G = standard_omega(n) @ K
    return bool(np.linalg.eigvalsh((G + G.T) / 2)[0] > 0)


def op_norm(A: np.ndarray) -> float:
    return float(np.linalg.svd(A, compute_uv=False)[0])


def invariance_residual(K: np.ndarray, W: np.ndarray) -> float:
    """Size of the part of K W sticking out of W."""
    Q = orth(W)
    KQ = K @ Q
    return float(np.max(np.abs(KQ - Q @ (Q.T @ KQ))))


# ---------------------------------------------------------------- constructions

def _symplectic_pair(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (x, y) spanning a 2-plane with omega(x, y) > 0."""
    Q = orth(P)
    if Q.shape[1] != 2:
        raise ConstructionError(f"expected a plane, got dimension {Q.shape[1]}")
    x, y = Q[:, 0], Q[:, 1]
    w = x @ standard_omega(_dim(P)) @ y
    if abs(w) <= TOL:
        raise ConstructionError("plane is not symplectic")
    return (x, y) if w > 0 else (x, -y)


def _codim2_frames(W: np.ndarray):
    W = np.asarray(W, dtype=float)
    n = _dim(W)
    Q = orth(W)
    if Q.shape[1] != 2 * n - 2:
        raise ValidationError("W must have codimension 2")
    if not is_symplectic(Q):
        raise ValidationError("W is not symplectic")
    J = standard_J(n)
    W0 = intersect(Q, J @ Q)
    if W0.shape[1] == 2 * n - 2:
        return W0, None
    if W0.shape[1] != 2 * n - 4:
        raise ConstructionError(f"W cap JW has dimension {W0.shape[1]}")
    x, y = _symplectic_pair(complement_within(Q, W0))
    u, v = _symplectic_pair(null_space((J @ Q).T))
    return W0, (x, y, u, v)


def construct_K_codim2(W: np.ndarray) -> np.ndarray:
    """Compatible K with K(W) = W and K(W^omega) = W^omega, close to J.

    W0 = W cap JW is complex and K = J there.  On the 2-plane W1 left over in
    W, and on W^omega, K rotates an oriented orthonormal frame by 90 degrees.
    Each frame vector moves by |Kx - Jx| = 2 sin(theta/2), but W^omega is not
    orthogonal to W, and the operator norm is 1/cos(theta) - 1 + tan(theta).
    """
    W0, frame = _codim2_frames(W)
    J = standard_J(_dim(np.asarray(W)))
    if frame is None:
        return J.copy()
    x, y, u, v = frame
    basis = np.column_stack([W0, x, y, u, v])
    image = np.column_stack([J @ W0, y, -x, v, -u])
    return image @ np.linalg.inv(basis)


def codim2_norm_formula(theta: float) -> float:
    """Operator norm of K - J for the rotation construction at Kähler angle theta."""
    return 1.0 / math.cos(theta) - 1.0 + math.tan(theta)


def codim2_report(W: np.ndarray, K: np.ndarray) -> dict:
    """Residuals of K and its deviation from J, on the frames and overall."""
    W = np.asarray(W, dtype=float)
    J = standard_J(_dim(W))
    W0, frame = _codim2_frames(W)
    vecs = [] if frame is None else list(frame)
    dev = max([float(np.linalg.norm((K - J) @ b)) for b in vecs] + [0.0])
    return {
        "compatibility": compatibility_residual(K),
        "invariance_W": invariance_residual(K, W),
        "invariance_W_omega": invariance_residual(K, omega_complement(W)),
        "frame_deviation": dev,
        "operator_norm": op_norm(K - J),
    }


def canonical_structure(omega: np.ndarray, G: np.ndarray) -> np.ndarray:
    """The compatible structure of (omega, g): polar part of g^{-1}-dual of omega."""
    ev, U = np.linalg.eigh(G)
    if ev[0] <= 0:
        raise ValidationError("metric is not positive definite")
    Gh = U @ np.diag(np.sqrt(ev)) @ U.T
    Gih = U @ np.diag(1 / np.sqrt(ev)) @ U.T
    B = -Gih @ omega @ Gih  # skew
    ev2, V = np.linalg.eigh(-(B @ B))
    if ev2[0] <= 0:
        raise ValidationError("omega is degenerate")
    JB = B @ (V @ np.diag(1 / np.sqrt(ev2)) @ V.T)
    return Gih @ JB @ Gh


@dataclass
class PairReport:
    K: np.ndarray
    distance_to_J: float
    residuals: dict
    diagnostics: dict


def construct_K_pair(W: np.ndarray, Wp: np.ndarray, eps: float, theta3: float) -> PairReport:
    """Compatible K leaving two codimension-2 subspaces invariant.

    With S = W cap W', P = W cap S^omega, P' = W' cap S^omega and Q the
    omega-complement of P in S^omega, P' is the graph of some L: P -> Q.
    K is the canonical structure on S and on P, and L K_P L^{-1} on Q; this
    is compatible exactly when L preserves orientation.  Any compatible K
    preserving P also preserves Q, so when L reverses orientation or has rank
    one no compatible structure preserves both subspaces, however small the
    Kähler angles are (W and W' still intersect positively).  Those cases
    raise ConstructionError.
    """
    W, Wp = np.asarray(W, dtype=float), np.asarray(Wp, dtype=float)
    n = _dim(W)
    J, Om = standard_J(n), standard_omega(n)
    Q, Qp = orth(W), orth(Wp)
    if Q.shape[1] != 2 * n - 2 or Qp.shape[1] != 2 * n - 2:
        raise ValidationError("both subspaces must have codimension 2")
    ang = min_angle(Q, Qp)
    if ang < eps:
        raise ValidationError(f"minimal angle {ang:.3g} below eps={eps}")
    th = max(kahler_angle(Q, _omega_orientation(Q)), kahler_angle(Qp, _omega_orientation(Qp)))
    if th > theta3:
        raise ValidationError(f"Kähler angle {th:.3g} above theta3={theta3}")
    S = intersect(Q, Qp)
    if S.shape[1] != 2 * n - 4:
        raise ConstructionError(f"W cap W' has dimension {S.shape[1]}")
    if S.shape[1] and not is_symplectic(S):
        raise ConstructionError("W cap W' is not symplectic")
    Som = null_space((J @ S).T) if S.shape[1] else np.eye(2 * n)
    P = intersect(Q, Som)
    Pp = intersect(Qp, Som)
    if P.shape[1] != 2 or Pp.shape[1] != 2:
        raise ConstructionError("residual planes have the wrong dimension")
    Pb = np.column_stack(_symplectic_pair(P))
    Qb = np.column_stack(_symplectic_pair(intersect(Som, null_space((J @ Pb).T))))
    coeffs = np.linalg.lstsq(np.hstack([Pb, Qb]), Pp, rcond=None)[0]
    Pc, Qc = coeffs[:2], coeffs[2:]
    cond = float(np.linalg.cond(Qc))
    if not np.isfinite(cond) or cond > 1e8:
        raise ConstructionError(f"W and W' are not transverse inside S^omega (condition {cond:.3g})")
    # P' is the graph of M: Q -> P; K_P M = M K_Q is needed
    M = Pc @ np.linalg.inv(Qc)
    KP = np.array([[0.0, -1.0], [1.0, 0.0]])
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] <= 1e-12:
        KQ = KP.copy()
    elif sv[1] <= 1e-9 * sv[0]:
        raise ConstructionError(
            "W' is the graph of a rank-one map over the complement of W; "
            "no omega-compatible structure preserves both")
    elif np.linalg.det(M) < 0:
        raise ConstructionError(
            "W' is the graph of an orientation-reversing map over the complement of W; "
            "no omega-compatible structure preserves both")
    else:
        KQ = np.linalg.inv(M) @ KP @ M
    blocks = [S] if S.shape[1] else []
    images = []
    if S.shape[1]:
        KS = canonical_structure(S.T @ Om @ S, np.eye(S.shape[1]))
        images.append(S @ KS)
    basis = np.hstack(blocks + [Pb, Qb])
    images += [Pb @ KP, Qb @ KQ]
    image = np.hstack(images)
    bcond = float(np.linalg.cond(basis))
    K = image @ np.linalg.inv(basis)
    if not is_compatible(K, 1e-7):
        raise ConstructionError("W and W' do not intersect positively; no compatible K preserves both")
    Wc = np.column_stack([intersect(Q, J @ Q), *_complex_line(Q)])
    residuals = {
        "square": float(np.max(np.abs(K @ K + np.eye(2 * n)))),
        "compatibility": compatibility_residual(K),
        "invariance_W": invariance_residual(K, Q),
        "invariance_W_prime": invariance_residual(K, Qp),
    }
    diagnostics = {
        "min_angle": ang,
        "max_kahler_angle": th,
        "basis_condition": bcond,
        "graph_condition": cond,
        "angle_to_complex": max_angle(Wc, Q),
    }
    return PairReport(K, op_norm(K - J), residuals, diagnostics)


def _omega_orientation(W: np.ndarray) -> int:
    return 1 if kahler_angle(W) <= math.pi / 2 else -1


def _complex_line(Q: np.ndarray):
    # x and Jx for a unit x in W orthogonal to W cap JW
    J = standard_J(_dim(Q))
    W0 = intersect(Q, J @ Q)
    rest = complement_within(Q, W0)
    if rest.shape[1] == 0:
        return []
    x = rest[:, 0]
    return [x, J @ x]


def min_angle_bound(T: np.ndarray, W: np.ndarray) -> tuple[float, float]:
    """(angle_m(W, ker T), nu(T|W) / |T|); the first is never smaller."""
    T = np.atleast_2d(np.asarray(T, dtype=float))
    norm = op_norm(T)
    if norm == 0:
        raise ValidationError("T = 0")
    Q = orth(W)
    s = np.linalg.svd(T @ Q, compute_uv=False)
    m = T.shape[0]
    nu = float(s[m - 1]) if s.size >= m and s[m - 1] > 1e-12 * norm else 0.0
    K = null_space(T)
    lhs = math.pi / 2 if K.shape[1] == 0 else min_angle(Q, K)
    return lhs, nu / norm


def metric_of(K: np.ndarray) -> np.ndarray:
    return standard_omega(_dim(K)) @ K


def canonical_path(J0: np.ndarray, J1: np.ndarray, t: float) -> np.ndarray:
    """Structure of (omega, (1-t) g_{J0} + t g_{J1})."""
    for K in (J0, J1):
        if not is_compatible(np.asarray(K, dtype=float), 1e-8):
            raise ValidationError("endpoints must be omega-compatible")
    if not 0 <= t <= 1:
        raise ValidationError("t must lie in [0, 1]")
    G = (1 - t) * metric_of(J0) + t * metric_of(J1)
    G = (G + G.T) / 2
    return canonical_structure(standard_omega(_dim(J0)), G)


# ---------------------------------------------------------------- sampling

def random_subspace(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(2 * n, m))


def random_skew(n: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.normal(size=(2 * n, 2 * n))
    return A - A.T


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.3) -> np.ndarray:
    from scipy.linalg import expm
    H = rng.normal(size=(2 * n, 2 * n))
    H = (H + H.T) / 2
    return expm(scale * standard_J(n) @ H)


def random_compatible(n: int, rng: np.random.Generator, scale: float = 0.3) -> np.ndarray:
    P = random_symplectic(n, rng, scale)
    return P @ standard_J(n) @ np.linalg.inv(P)


def near_complex_subspace(n: int, m: int, rng: np.random.Generator, scale: float) -> np.ndarray:
    """Small random perturbation of a random complex subspace of real dimension m."""
    J = standard_J(n)
    V = rng.normal(size=(2 * n, m // 2))
    C = np.hstack([V, J @ V])
    return C + scale * rng.normal(size=C.shape)

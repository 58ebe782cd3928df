"""
Certificate-producing parallelism deciders.

Each decider answers A || B for one family of norms through a structural
characterization and returns a witness that can be re-checked on its own:

- operator norm: unit vectors x, y with x*Ay = ||A|| and |x*By| = ||B||,
  found from the numerical range of the compression U1* B V1
- Schatten p (1 < p < inf): the trace identity on the polar factors of A
- Ky-Fan k and trace norm: a dual matrix F from the SVD of A + lambda* B
- induced l1 / l-inf on real matrices: a convex combination of extreme
  points of V(A)
- any induced norm: a single vector y with Ay || By (sufficient only)
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
from ortools.linear_solver import pywraplp

from parallax.errors import (
    BadHandleError,
    ComplexInputError,
    NotSquareError,
    ShapeMismatchError,
    SingularMatrixError,
    TooLargeError,
)
from parallax.geometry import ParallelVerdict, is_parallel, vector_parallel
from parallax.linalg import (
    ComplexMatrix,
    ComplexVector,
    Tolerance,
    as_matrix,
    as_vector,
    svd,
    top_singular_subspace,
)
from parallax.norms import (
    SPECTRAL,
    TRACE,
    NormHandle,
    VectorNormTag,
    check_handle,
    matrix_norm,
    vector_norm,
)
from parallax.numrange import in_numerical_range, numerical_radius_witness

logger = logging.getLogger("parallax.certificates")

# Slack on the dual-ball constraints of F
SPECTRAL_SLACK = 1e-10
TRACE_SLACK = 1e-8
UNIT_SLACK = 1e-10

# Largest n for extreme-point enumeration (2^n sign vectors)
MAX_ENUM_DIM = 12


@dataclass
class CheckReport:
    """Named pass/fail checks with the numbers behind them."""
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]


def _pair(a, b) -> tuple[ComplexMatrix, ComplexMatrix]:
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return a, b


def _square_pair(a, b) -> tuple[ComplexMatrix, ComplexMatrix]:
    a, b = _pair(a, b)
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"square matrices required (got {a.shape[0]}x{a.shape[1]})")
    return a, b


def _close(value: float, target: float, tol: Tolerance) -> bool:
    return abs(value - target) <= tol.threshold(target)


# --- Operator norm ---

@dataclass(frozen=True)
class OpNormCertificate:
    """Unit vectors x, y with x*Ay = ||A||_inf and |x*By| = ||B||_inf.

    `lambda_` is the unimodular scalar with lambda_ * x*By = -||B||_inf, the
    rotation under which -||B||_inf lies in W(lambda_ U1* B V1).
    """
    x: ComplexVector
    y: ComplexVector
    lambda_: complex
    x_ay: complex
    x_by: complex

    def verify(self, a, b, tol: Tolerance | None = None) -> CheckReport:
        tol = tol or Tolerance()
        a, b = _pair(a, b)
        na = matrix_norm(a, SPECTRAL)
        nb = matrix_norm(b, SPECTRAL)
        x_ay = complex(np.vdot(self.x, a @ self.y))
        x_by = complex(np.vdot(self.x, b @ self.y))
        report = CheckReport(details={
            "norm_a": na,
            "norm_b": nb,
            "re_x_ay": x_ay.real,
            "im_x_ay": x_ay.imag,
            "abs_x_by": abs(x_by),
        })
        report.checks["unit_x"] = abs(np.linalg.norm(self.x) - 1) <= UNIT_SLACK
        report.checks["unit_y"] = abs(np.linalg.norm(self.y) - 1) <= UNIT_SLACK
        report.checks["unimodular_lambda"] = abs(abs(self.lambda_) - 1) <= 1e-12
        report.checks["x_ay_is_norm_a"] = abs(x_ay - na) <= tol.threshold(na)
        report.checks["abs_x_by_is_norm_b"] = _close(abs(x_by), nb, tol)
        report.checks["stored_values"] = (
            abs(x_ay - self.x_ay) <= tol.threshold(na) and abs(x_by - self.x_by) <= tol.threshold(nb)
        )
        report.checks["range_condition"] = opnorm_range_condition(a, b, self.lambda_, tol)
        report.checks["vector_condition"] = opnorm_vector_condition(a, b, self.y, tol)
        return report


def opnorm_vector_condition(a, b, y, tol: Tolerance | None = None) -> bool:
    """||Ay|| = ||A||_inf and |<Ay, By>| = ||A||_inf ||B||_inf for unit y."""
    tol = tol or Tolerance()
    a, b = _pair(a, b)
    y = as_vector(y, "y")
    if abs(np.linalg.norm(y) - 1) > UNIT_SLACK:
        return False
    na = matrix_norm(a, SPECTRAL)
    nb = matrix_norm(b, SPECTRAL)
    ay = a @ y
    return _close(float(np.linalg.norm(ay)), na, tol) and _close(abs(np.vdot(b @ y, ay)), na * nb, tol)


def opnorm_range_condition(a, b, lambda_: complex, tol: Tolerance | None = None) -> bool:
    """-||B||_inf in W(lambda U1* B V1), U1/V1 from the top singular subspace of A."""
    tol = tol or Tolerance()
    a, b = _pair(a, b)
    top = top_singular_subspace(a, tol)
    nb = matrix_norm(b, SPECTRAL)
    compression = lambda_ * (top.u1.conj().T @ b @ top.v1)
    return in_numerical_range(compression, -nb, tol)


def opnorm_parallel_decide(a, b, tol: Tolerance | None = None) -> tuple[ParallelVerdict, OpNormCertificate | None]:
    """Decide A || B in the operator norm through the compression M = U1* B V1.

    A || B iff the numerical radius of M equals ||B||_inf. A unit xi with
    z = [M xi, xi] of modulus w then yields x = U1 xi, y = V1 xi and the
    maximizing rotation lambda* = conj(z) / |z|.
    """
    tol = tol or Tolerance()
    a, b = _pair(a, b)
    top = top_singular_subspace(a, tol)
    na = matrix_norm(a, SPECTRAL)
    nb = matrix_norm(b, SPECTRAL)

    m = top.u1.conj().T @ b @ top.v1
    w, theta, xi = numerical_radius_witness(m, tol)
    parallel = w >= nb - tol.threshold(nb)

    # The phase of z is exact where the search angle is only good to ~1e-8
    z = complex(np.vdot(xi, m @ xi))
    lambda_star = complex(np.conj(z) / abs(z)) if abs(z) > 0 else complex(np.exp(-1j * theta))
    achieved = matrix_norm(a + lambda_star * b, SPECTRAL)
    verdict = ParallelVerdict(
        parallel=parallel,
        lambda_star=lambda_star,
        achieved=achieved,
        bound=na + nb,
        gap=max(0.0, na + nb - achieved),
    )
    logger.debug(f"opnorm_parallel_decide: m={top.multiplicity} w(M)={w:.12g} ||B||={nb:.12g} parallel={parallel}")
    if not parallel:
        return verdict, None

    x = top.u1 @ xi
    y = top.v1 @ xi
    x /= np.linalg.norm(x)
    y /= np.linalg.norm(y)
    certificate = OpNormCertificate(
        x=x,
        y=y,
        lambda_=-lambda_star,
        x_ay=complex(np.vdot(x, a @ y)),
        x_by=complex(np.vdot(x, b @ y)),
    )
    return verdict, certificate


# --- Schatten p ---

class SchattenCondition(NamedTuple):
    holds: bool
    lhs: float  # |tr(D^{p-1} C B*)|
    rhs: float  # ||B||_p ||D||_p^p / ||A||_p


def schatten_condition(a, b, p: float, tol: Tolerance | None = None) -> SchattenCondition:
    """Trace criterion for A || B in the Schatten p-norm, 1 < p < inf.

    With A = U diag(s) V*, the polar factors are D = U diag(s) U* and
    C = U V*, so D^{p-1} C = U diag(s^{p-1}) V*.
    """
    tol = tol or Tolerance()
    if not (1 < p < math.inf):
        raise BadHandleError(f"Schatten condition needs 1 < p < inf (got {p})")
    a, b = _square_pair(a, b)
    dec = svd(a)
    s = dec.singular_values
    if dec.s1 == 0.0 or s[-1] <= tol.rel_tol * dec.s1:
        raise SingularMatrixError(f"A is singular within tolerance (s_min={s[-1]:.3g}, s_1={dec.s1:.3g})")

    weighted = (dec.u * s ** (p - 1)) @ dec.v.conj().T
    lhs = abs(complex(np.trace(weighted @ b.conj().T)))
    h = NormHandle.schatten(p)
    norm_d = float(np.sum(s ** p) ** (1 / p))
    rhs = matrix_norm(b, h) * norm_d ** p / matrix_norm(a, h)
    return SchattenCondition(holds=abs(lhs - rhs) <= tol.threshold(max(1.0, rhs)), lhs=lhs, rhs=rhs)


# --- Ky-Fan and trace norm ---

@dataclass(frozen=True)
class DualCertificate:
    """Dual matrix F witnessing A || B in a Ky-Fan norm.

    ||F||_inf <= 1, ||F||_1 <= k, tr(F*A) = ||A||_(k) and |tr(F*B)| = ||B||_(k).
    `k` is None for the trace-norm case.
    """
    f: ComplexMatrix
    k: int | None
    traces: tuple[complex, complex]  # (tr(F*A), tr(F*B))
    lambda_star: complex
    tie_warning: bool
    report: CheckReport


def is_schatten_extreme_point(f, p: float, tol: Tolerance | None = None) -> bool:
    """Is F an extreme point of the Schatten-p unit ball?

    p = 1: F = xy* with unit x, y. 1 < p < inf: ||F||_p = 1.
    p = inf: FF* = I.
    """
    tol = tol or Tolerance()
    f = as_matrix(f, "f")
    s = np.linalg.svd(f, compute_uv=False)
    if p == 1:
        rank_one = s.size == 1 or s[1] <= tol.threshold(1.0)
        return bool(rank_one and _close(float(s[0]), 1.0, tol))
    if math.isinf(p):
        gram = f @ f.conj().T
        return bool(np.linalg.norm(gram - np.eye(f.shape[0])) <= tol.threshold(1.0) * f.shape[0])
    return _close(matrix_norm(f, NormHandle.schatten(p)), 1.0, tol)


def _dual_certificate(a, b, h: NormHandle, k: int, tol: Tolerance) -> DualCertificate | None:
    verdict = is_parallel(a, b, h, tol)
    if not verdict.parallel:
        logger.debug(f"no dual certificate: not parallel in {h} (gap={verdict.gap:.3g})")
        return None

    dec = svd(a + verdict.lambda_star * b)
    f = dec.u[:, :k] @ dec.v[:, :k].conj().T
    tr_a = complex(np.vdot(f, a))
    if abs(tr_a) > 0:
        f = f * (tr_a / abs(tr_a))
    tr_a = complex(np.vdot(f, a))
    tr_b = complex(np.vdot(f, b))

    na = matrix_norm(a, h)
    nb = matrix_norm(b, h)
    s = dec.singular_values
    next_s = float(s[k]) if k < s.size else 0.0
    tie = abs(float(s[k - 1]) - next_s) <= tol.threshold(dec.s1)

    fs = np.linalg.svd(f, compute_uv=False)
    report = CheckReport(details={
        "spectral_norm_f": float(fs[0]),
        "trace_norm_f": float(fs.sum()),
        "re_tr_fa": tr_a.real,
        "im_tr_fa": tr_a.imag,
        "abs_tr_fb": abs(tr_b),
        "norm_a": na,
        "norm_b": nb,
    })
    report.checks["spectral_norm_f"] = fs[0] <= 1 + SPECTRAL_SLACK
    report.checks["trace_norm_f"] = fs.sum() <= k + TRACE_SLACK
    report.checks["tr_fa_is_norm_a"] = abs(tr_a - na) <= tol.threshold(na)
    report.checks["abs_tr_fb_is_norm_b"] = _close(abs(tr_b), nb, tol)
    n = min(a.shape)
    if k == 1:
        report.checks["extreme_shape"] = is_schatten_extreme_point(f, 1.0, tol)
    elif k == n and a.shape[0] == a.shape[1]:
        report.checks["extreme_shape"] = is_schatten_extreme_point(f, math.inf, tol)

    if tie:
        logger.warning(f"singular value tie at k={k} in A + lambda* B: F may need a subspace rotation")
    certificate = DualCertificate(
        f=f,
        k=None if h == TRACE else k,
        traces=(tr_a, tr_b),
        lambda_star=verdict.lambda_star,
        tie_warning=tie,
        report=report,
    )
    if report.ok or tie:
        return certificate
    logger.warning(f"dual certificate for {h} failed checks {report.failed}")
    return None


def kyfan_certificate(a, b, k: int, tol: Tolerance | None = None) -> DualCertificate | None:
    """Dual matrix F = U_k V_k* from the SVD of A + lambda* B, or None if not parallel."""
    tol = tol or Tolerance()
    a, b = _pair(a, b)
    h = NormHandle.kyfan(k)
    check_handle(a.shape, h)
    return _dual_certificate(a, b, h, k, tol)


def trace_certificate(a, b, tol: Tolerance | None = None) -> DualCertificate | None:
    """Ky-Fan certificate with k = n: F = UV* from the full SVD of A + lambda* B."""
    tol = tol or Tolerance()
    a, b = _square_pair(a, b)
    return _dual_certificate(a, b, TRACE, a.shape[0], tol)


# --- Induced l1 / l-inf: extreme points ---

@dataclass(frozen=True)
class ExtremePointDecomposition:
    """Pairs (x_j, y_j) in V(A) and weights t_j with |sum t_j x_j* B y_j| = ||B||."""
    pairs: list[tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]]
    weights: list[float]
    value: float


def _real(a, name: str) -> npt.NDArray[np.float64]:
    a = as_matrix(a, name)
    if np.any(a.imag != 0):
        raise ComplexInputError(f"{name} must have real entries")
    return a.real.copy()


def sign_vectors(n: int) -> npt.NDArray[np.float64]:
    """All 2^n vectors with entries +-1, first entry +1 first."""
    return np.array(list(itertools.product((1.0, -1.0), repeat=n)))


def _extreme_pairs(a: npt.NDArray[np.float64], vt: VectorNormTag, tol: Tolerance):
    """V(A) up to the overall sign (x, y) -> (-x, -y)."""
    n = a.shape[0]
    na = matrix_norm(a, NormHandle.induced(vt))
    signs = sign_vectors(n)
    eye = np.eye(n)
    pairs = []
    if vt == VectorNormTag.LINF:
        # y extreme in the l-inf ball (signs with y_0 = +1), x = +-e_i
        values = signs[: 2 ** (n - 1)] @ a.T
        for row, y in enumerate(signs[: 2 ** (n - 1)]):
            for i in range(n):
                for sign in (1.0, -1.0):
                    if sign * values[row, i] >= na - tol.threshold(na):
                        pairs.append((sign * eye[i], y))
    else:
        # y = e_j, x extreme in the l-inf ball
        values = signs @ a
        for row, x in enumerate(signs):
            for j in range(n):
                if values[row, j] >= na - tol.threshold(na):
                    pairs.append((x, eye[j]))
    return pairs


def _best_combination(c: npt.NDArray[np.float64], sign: float) -> tuple[list[float], float] | None:
    """Weights t >= 0, sum t = 1, maximizing sign * sum t_j c_j (GLOP)."""
    solver = pywraplp.Solver.CreateSolver("GLOP")
    if solver is None:
        raise RuntimeError("GLOP solver unavailable")
    t = [solver.NumVar(0.0, 1.0, f"t_{j}") for j in range(len(c))]
    solver.Add(solver.Sum(t) == 1.0)
    solver.Maximize(solver.Sum([sign * float(cj) * tj for cj, tj in zip(c, t)]))
    if solver.Solve() != pywraplp.Solver.OPTIMAL:
        return None
    return [tj.solution_value() for tj in t], solver.Objective().Value()


def extreme_point_check(a, b, vt: VectorNormTag, tol: Tolerance | None = None) -> ExtremePointDecomposition | None:
    """Decide A || B in the induced l1 / l-inf norm on real matrices.

    Enumerates V(A) = {xy* : x, y extreme, x*Ay = ||A||}, then looks for
    weights t with |sum t_j x_j* B y_j| = ||B|| by linear programming over
    each sign of the sum. The objective is linear over the simplex, so the
    basic solution GLOP returns puts all weight on a single pair.
    """
    tol = tol or Tolerance()
    vt = VectorNormTag(vt)
    if vt == VectorNormTag.L2:
        raise BadHandleError("extreme-point enumeration supports l1 and linf only")
    a = _real(a, "a")
    b = _real(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"induced norms need square matrices (got {a.shape[0]}x{a.shape[1]})")
    n = a.shape[0]
    if n > MAX_ENUM_DIM:
        raise TooLargeError(f"extreme-point enumeration supports n <= {MAX_ENUM_DIM} (got {n})")
    if not np.any(a):
        logger.debug("extreme_point_check: A = 0, V(A) is empty")
        return None

    h = NormHandle.induced(vt)
    nb = matrix_norm(b, h)
    pairs = _extreme_pairs(a, vt, tol)
    c = np.array([x @ b @ y for x, y in pairs])
    logger.debug(f"extreme_point_check[{h}]: |V(A)| = {len(pairs)}, ||B|| = {nb:.12g}")

    for sign in (1.0, -1.0):
        found = _best_combination(c, sign)
        if found is None:
            continue
        weights, value = found
        if value < nb - tol.threshold(nb):
            continue
        active = [j for j, w in enumerate(weights) if w > 1e-12]
        total = sum(weights[j] for j in active)
        chosen = [weights[j] / total for j in active]
        return ExtremePointDecomposition(
            pairs=[pairs[j] for j in active],
            weights=chosen,
            value=abs(float(sum(w * c[j] for w, j in zip(chosen, active)))),
        )
    return None


# --- Vector-level sufficiency ---

class VectorSufficiency(NamedTuple):
    found: bool
    y: ComplexVector | None
    parallel: bool  # is_parallel under the induced norm, for comparison


def _maximizer_candidates(a: ComplexMatrix, vt: VectorNormTag, tol: Tolerance) -> list[ComplexVector]:
    n = a.shape[1]
    eye = np.eye(n, dtype=np.complex128)
    if vt == VectorNormTag.L1:
        return [eye[:, j] for j in range(n)]
    if vt == VectorNormTag.LINF:
        if not np.any(a.imag) and n <= MAX_ENUM_DIM:
            return [s.astype(np.complex128) for s in sign_vectors(n)]
        candidates = []
        for row in a:
            mod = np.abs(row)
            phases = np.ones(n, dtype=np.complex128)
            nz = mod > 0
            phases[nz] = np.conj(row[nz]) / mod[nz]
            candidates.append(phases)
        return candidates
    # Top right singular vectors of A are the top left ones of A*
    top = top_singular_subspace(a.conj().T, tol)
    return [top.u1[:, j] for j in range(top.multiplicity)]


def vector_level_sufficiency(a, b, vt: VectorNormTag, tol: Tolerance | None = None) -> VectorSufficiency:
    """Look for a maximizing vector y with Ay || By.

    y must satisfy nu(y) = 1, nu(Ay) = ||A|| and nu(By) = ||B||; any such y
    with Ay || By proves A || B. Failing to find one proves nothing.

    For l2 the first candidate is the y of the operator-norm certificate,
    which covers a top singular subspace of any multiplicity. For l1 and
    linf only finitely many extreme points of the unit ball are tried.
    """
    tol = tol or Tolerance()
    vt = VectorNormTag(vt)
    a, b = _square_pair(a, b)
    h = NormHandle.induced(vt)
    parallel = is_parallel(a, b, h, tol).parallel
    na = matrix_norm(a, h)
    nb = matrix_norm(b, h)
    if na == 0.0 and nb == 0.0:
        y = np.zeros(a.shape[1], dtype=np.complex128)
        y[0] = 1.0
        return VectorSufficiency(found=True, y=y, parallel=parallel)

    # With A = 0 every unit y maximizes A, so search the maximizers of B
    candidates = _maximizer_candidates(b if na == 0.0 else a, vt, tol)
    if vt == VectorNormTag.L2 and na > 0.0 and nb > 0.0:
        _, cert = opnorm_parallel_decide(a, b, tol)
        if cert is not None:
            candidates.insert(0, cert.y)
    for y in candidates:
        y = y / vector_norm(y, vt)
        ay, by = a @ y, b @ y
        if not (_close(vector_norm(ay, vt), na, tol) and _close(vector_norm(by, vt), nb, tol)):
            continue
        if vector_parallel(ay, by, vt, tol).parallel:
            if not parallel:
                logger.warning(f"vector-level witness found in {h} but is_parallel disagrees")
            return VectorSufficiency(found=True, y=y, parallel=parallel)

    if parallel:
        logger.info(f"A || B in {h} without a vector-level witness")
    return VectorSufficiency(found=False, y=None, parallel=parallel)

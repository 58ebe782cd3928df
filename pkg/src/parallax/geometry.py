"""
Generic deciders for norm-parallelism and Birkhoff-James orthogonality.

A || B iff max over unimodular lambda of ||A + lambda B|| reaches ||A|| + ||B||;
x is BJ-orthogonal to y iff min over complex alpha of ||x + alpha y|| is ||x||.
Both reduce to scalar searches: a 2*pi-periodic maximization over the unit
circle and a convex minimization over a disk in the complex plane.
"""
import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize

from parallax.errors import ShapeMismatchError
from parallax.linalg import Tolerance, as_matrix, as_vector
from parallax.norms import (
    NormHandle,
    VectorNormTag,
    check_handle,
    matrix_norm,
    norms_of_stack,
    vector_norm,
    vector_norms_of_stack,
)
from parallax.optimize import maximize_periodic

logger = logging.getLogger("parallax.geometry")

# Matrices per batched norm evaluation
CHUNK = 512

# Polar grid used before local descent in the BJ decider
BJ_RINGS = 24
BJ_SPOKES = 48


@dataclass(frozen=True)
class ParallelVerdict:
    """Outcome of a parallelism decision."""
    parallel: bool
    lambda_star: complex  # unimodular maximizer of ||a + lambda b||
    achieved: float       # ||a + lambda_star b||
    bound: float          # ||a|| + ||b||
    gap: float            # bound - achieved, clipped at 0


@dataclass(frozen=True)
class BjoVerdict:
    """Outcome of a Birkhoff-James orthogonality decision."""
    orthogonal: bool
    alpha_star: complex   # minimizer of ||x + alpha y||
    min_value: float


@dataclass(frozen=True)
class BjoReduction:
    """A || B checked as A _|_B (||B|| A + lam ||A|| B) with lam = -lambda_star."""
    parallel: ParallelVerdict
    orthogonality: BjoVerdict
    lam: complex


def make_verdict(lambda_star: complex, achieved: float, bound: float, tol: Tolerance) -> ParallelVerdict:
    """Fill a ParallelVerdict from a search result."""
    achieved = max(0.0, float(achieved))
    gap = max(0.0, bound - achieved)
    return ParallelVerdict(
        parallel=gap <= tol.threshold(bound),
        lambda_star=complex(lambda_star),
        achieved=achieved,
        bound=float(bound),
        gap=gap,
    )


def _require_same_shape(a, b):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")


def circle_profile(a, b, h: NormHandle, thetas: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """||A + e^{i theta} B||_h for every theta, evaluated in chunks."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    out = np.empty(thetas.shape[0])
    for start in range(0, thetas.shape[0], CHUNK):
        phases = np.exp(1j * thetas[start:start + CHUNK])
        out[start:start + CHUNK] = norms_of_stack(a[None] + phases[:, None, None] * b[None], h)
    return out


def is_parallel(a, b, h: NormHandle, tol: Tolerance | None = None) -> ParallelVerdict:
    """Decide A || B in the norm h.

    g(theta) = ||A + e^{i theta} B|| is maximized on a uniform grid of
    tol.grid_points angles and refined by golden-section search around the
    best bracket.
    """
    tol = tol or Tolerance()
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    _require_same_shape(a, b)
    check_handle(a.shape, h)

    na = matrix_norm(a, h)
    nb = matrix_norm(b, h)
    if nb == 0.0:
        return make_verdict(1.0, na, na, tol)

    best = maximize_periodic(lambda t: circle_profile(a, b, h, t), tol.grid_points, tol.refine_iters)
    verdict = make_verdict(np.exp(1j * best.theta), best.value, na + nb, tol)
    logger.debug(f"is_parallel[{h}]: achieved={verdict.achieved:.12g} bound={verdict.bound:.12g} gap={verdict.gap:.3g}")
    return verdict


def vector_parallel(u, v, vt: VectorNormTag, tol: Tolerance | None = None) -> ParallelVerdict:
    """Decide u || v in the vector norm vt by the same lambda search."""
    tol = tol or Tolerance()
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    _require_same_shape(u, v)
    nu = vector_norm(u, vt)
    nv = vector_norm(v, vt)
    if nv == 0.0:
        return make_verdict(1.0, nu, nu, tol)

    def profile(thetas):
        phases = np.exp(1j * np.atleast_1d(thetas))
        return vector_norms_of_stack(u[None] + phases[:, None] * v[None], vt)

    best = maximize_periodic(profile, tol.grid_points, tol.refine_iters)
    return make_verdict(np.exp(1j * best.theta), best.value, nu + nv, tol)


# --- Birkhoff-James orthogonality ---

def _polar_grid(radius: float, rings: int, spokes: int) -> npt.NDArray[np.complex128]:
    """alpha = 0 plus `rings` circles of `spokes` points inside |alpha| <= radius."""
    radii = radius * np.arange(1, rings + 1) / rings
    angles = 2 * np.pi * np.arange(spokes) / spokes
    return np.concatenate([[0.0], (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()])


def bj_coarse_minima(x, ys, h: NormHandle, rings: int = 8, spokes: int = 24) -> npt.NDArray[np.float64]:
    """Polar-grid upper bounds of min_alpha ||x + alpha y|| for a stack of directions.

    Each direction uses the disk |alpha| <= 2||x|| / ||y||; zero directions
    give ||x||.
    """
    nx = matrix_norm(x, h)
    ny = norms_of_stack(ys, h)
    unit = _polar_grid(1.0, rings, spokes)
    out = np.full(ys.shape[0], nx)
    for i in np.flatnonzero(ny > 0):
        alphas = unit * (2 * nx / ny[i])
        out[i] = min(nx, float(norms_of_stack(x[None] + alphas[:, None, None] * ys[i][None], h).min()))
    return out


def is_bj_orthogonal(x, y, h: NormHandle, tol: Tolerance | None = None) -> BjoVerdict:
    """Decide x _|_B y: ||x|| <= ||x + alpha y|| for every complex alpha.

    f(alpha) = ||x + alpha y|| is convex; outside |alpha| <= 2||x||/||y|| it
    exceeds ||x||, so a polar grid on that disk followed by Nelder-Mead
    descent from the best grid point finds the minimum. The search runs on
    y / ||y||, so the verdict does not depend on the scale of y; only y = 0
    (or x = 0) is trivially orthogonal.
    """
    tol = tol or Tolerance()
    x = as_matrix(x, "x")
    y = as_matrix(y, "y")
    _require_same_shape(x, y)
    check_handle(x.shape, h)

    nx = matrix_norm(x, h)
    ny = matrix_norm(y, h)
    if ny == 0.0 or nx == 0.0:
        return BjoVerdict(orthogonal=True, alpha_star=0j, min_value=nx)

    y = y / ny
    radius = 2 * nx
    alphas = _polar_grid(radius, BJ_RINGS, BJ_SPOKES)
    values = norms_of_stack(x[None] + alphas[:, None, None] * y[None], h)
    k = int(np.argmin(values))
    best_alpha, best_value = complex(alphas[k]), float(values[k])

    def f(z):
        return matrix_norm(x + complex(z[0], z[1]) * y, h)

    step = radius / BJ_RINGS
    simplex = np.array([
        [best_alpha.real, best_alpha.imag],
        [best_alpha.real + step, best_alpha.imag],
        [best_alpha.real, best_alpha.imag + step],
    ])
    res = minimize(
        f,
        simplex[0],
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": 1e-12 * max(1.0, radius),
            "fatol": 1e-14 * max(1.0, nx),
            "maxiter": 40 * tol.refine_iters,
        },
    )
    if res.fun < best_value:
        best_alpha, best_value = complex(res.x[0], res.x[1]), float(res.fun)

    best_alpha /= ny
    orthogonal = best_value >= nx - tol.threshold(nx)
    logger.debug(f"is_bj_orthogonal[{h}]: ||x||={nx:.12g} min={best_value:.12g} alpha={best_alpha:.6g}")
    return BjoVerdict(orthogonal=orthogonal, alpha_star=best_alpha, min_value=best_value)


def parallel_bjo_witness(a, b, h: NormHandle, tol: Tolerance | None = None) -> BjoReduction:
    """Check A || B through its orthogonality form.

    If ||A + lambda* B|| = ||A|| + ||B||, then A _|_B (||B|| A - lambda* ||A|| B);
    the orthogonality is tested at lam = -lambda*.
    """
    tol = tol or Tolerance()
    verdict = is_parallel(a, b, h, tol)
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    lam = -verdict.lambda_star
    direction = matrix_norm(b, h) * a + lam * matrix_norm(a, h) * b
    return BjoReduction(parallel=verdict, orthogonality=is_bj_orthogonal(a, direction, h, tol), lam=lam)

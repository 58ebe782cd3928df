"""
Numerical range W(T) and numerical radius.

W(T) is compact and convex, so it is the intersection of the half-planes
Re(e^{-i theta} z) <= h(theta) with support function
h(theta) = lambda_max(H(e^{-i theta} T)), H(M) = (M + M*)/2.
"""
import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from parallax.errors import NotSquareError
from parallax.linalg import ComplexMatrix, ComplexVector, Tolerance, as_matrix, unit_circle
from parallax.optimize import maximize_periodic, minimize_periodic

logger = logging.getLogger("parallax.numrange")


@dataclass(frozen=True)
class NumRangeQuery:
    """Membership test of `point` in W(t).

    margin = min over theta of h(theta) - Re(e^{-i theta} point); it is
    negative exactly when some supporting half-plane excludes the point.
    """
    t: ComplexMatrix
    point: complex
    margin: float
    theta: float  # angle of the tightest half-plane


def _square(t, name: str = "t") -> ComplexMatrix:
    t = as_matrix(t, name)
    if t.shape[0] != t.shape[1]:
        raise NotSquareError(f"{name} must be square (got {t.shape[0]}x{t.shape[1]})")
    return t


def _rotated_hermitian_parts(t: ComplexMatrix, thetas: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
    rot = np.exp(-1j * thetas)[:, None, None] * t[None]
    return (rot + np.conj(np.swapaxes(rot, -1, -2))) / 2


def support_values(t, thetas) -> npt.NDArray[np.float64]:
    """h(theta) for an array of angles."""
    t = _square(t)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    return np.linalg.eigvalsh(_rotated_hermitian_parts(t, thetas))[:, -1]


def support_value(t, theta: float) -> float:
    """lambda_max((e^{-i theta} T + e^{i theta} T*) / 2)."""
    return float(support_values(t, [theta])[0])


def numrange_query(t, z: complex, tol: Tolerance | None = None) -> NumRangeQuery:
    tol = tol or Tolerance()
    t = _square(t)
    z = complex(z)

    def margins(thetas):
        return support_values(t, thetas) - np.real(np.exp(-1j * thetas) * z)

    found = minimize_periodic(margins, tol.grid_points, tol.refine_iters)
    return NumRangeQuery(t=t, point=z, margin=found.value, theta=found.theta)


def in_numerical_range(t, z: complex, tol: Tolerance | None = None) -> bool:
    """True iff z lies in W(t), boundary points included.

    The acceptance band is abs_tol + rel_tol * ||t||_inf.
    """
    tol = tol or Tolerance()
    t = _square(t)
    query = numrange_query(t, z, tol)
    scale = float(np.linalg.norm(t, 2))
    inside = query.margin >= -tol.threshold(scale)
    logger.debug(f"in_numerical_range: z={query.point:.6g} margin={query.margin:.3g} inside={inside}")
    return inside


def numerical_radius_witness(t, tol: Tolerance | None = None) -> tuple[float, float, ComplexVector]:
    """Numerical radius w(t) with its witness.

    Returns:
        (w, theta, xi) with xi a unit vector and [t xi, xi] = w e^{i theta}
        up to rounding. The zero matrix gives (0, 0, e1).
    """
    tol = tol or Tolerance()
    t = _square(t)
    n = t.shape[0]
    if not np.any(t):
        return 0.0, 0.0, np.eye(n, dtype=np.complex128)[:, 0]

    best = maximize_periodic(lambda th: support_values(t, th), tol.grid_points, tol.refine_iters)
    _, q = np.linalg.eigh(_rotated_hermitian_parts(t, np.array([best.theta]))[0])
    xi = q[:, -1]
    return max(0.0, best.value), best.theta, xi


def numerical_radius(t, tol: Tolerance | None = None) -> float:
    """max over unit xi of |[t xi, xi]|, computed as max over theta of h(theta)."""
    return numerical_radius_witness(t, tol)[0]


def boundary(t, points: int) -> list[complex]:
    """Boundary polyline of W(t).

    For each of `points` uniform angles, the top eigenvector xi of the
    rotated Hermitian part gives the boundary point [t xi, xi].
    """
    t = _square(t)
    if points < 1:
        return []
    thetas = unit_circle(points)
    _, q = np.linalg.eigh(_rotated_hermitian_parts(t, thetas))
    xis = q[:, :, -1]
    values = np.einsum("ki,ij,kj->k", xis.conj(), t, xis)
    return [complex(v) for v in values]

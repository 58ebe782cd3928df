"""
Finite-dimensional Hilbert K(H)-module simulator.

Elements are d x n complex matrices over K(C^d) = M_d, with the M_d-valued
inner product <x, y> = x y* and norm ||x|| = ||<x, x>||^(1/2), the largest
singular value of x. A unit vector xi gives the orthonormal basis
x_j = xi e_j* whose self inner products all equal the minimal projection
xi xi*.

Every check returns the parallelism verdict next to the equivalent condition
so that the two can be compared.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from parallax.errors import (
    BadBasisError,
    BadDimensionError,
    InputError,
    NotIdempotentError,
    NotMinimalError,
    NotUnitError,
    ShapeMismatchError,
)
from parallax.geometry import ParallelVerdict, bj_coarse_minima, is_bj_orthogonal, is_parallel
from parallax.linalg import (
    ComplexMatrix,
    ComplexVector,
    Tolerance,
    as_matrix,
    as_vector,
    random_matrix,
    svd,
    unit_circle,
)
from parallax.norms import SPECTRAL, matrix_norm
from parallax.numrange import numerical_radius
from parallax.optimize import golden_section_max

logger = logging.getLogger("parallax.kmodule")

# |xi| = 1 slack for minimal projections
UNIT_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class ModuleElement:
    """Element of the module M_{d x n}."""
    mat: ComplexMatrix

    def __post_init__(self):
        object.__setattr__(self, "mat", as_matrix(self.mat, "module element"))

    @property
    def d(self) -> int:
        return self.mat.shape[0]

    @property
    def n(self) -> int:
        return self.mat.shape[1]

    @property
    def norm(self) -> float:
        return module_norm(self)

    def act(self, a) -> "ModuleElement":
        """Left action of a d x d matrix."""
        return ModuleElement(as_matrix(a, "coefficient") @ self.mat)


class TheoremCheck(NamedTuple):
    lhs_parallel: bool
    rhs_holds: bool

    @property
    def agrees(self) -> bool:
        return self.lhs_parallel == self.rhs_holds


class TransitivityCheck(NamedTuple):
    premises: bool
    conclusion: bool

    @property
    def violated(self) -> bool:
        return self.premises and not self.conclusion


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    xi: ComplexVector
    elements: list[ModuleElement]

    @property
    def projection(self) -> ComplexMatrix:
        return minimal_projection(self.xi)


def _element(x) -> ModuleElement:
    return x if isinstance(x, ModuleElement) else ModuleElement(x)


def _same_shape(x: ModuleElement, y: ModuleElement):
    if x.mat.shape != y.mat.shape:
        raise ShapeMismatchError(f"module elements differ in shape: {x.mat.shape} vs {y.mat.shape}")


def mod_inner(x, y) -> ComplexMatrix:
    """<x, y> = x y*, a d x d matrix."""
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    return x.mat @ y.mat.conj().T


def module_norm(x) -> float:
    return matrix_norm(_element(x).mat, SPECTRAL)


def _check_unit(xi) -> ComplexVector:
    xi = as_vector(xi, "xi")
    if abs(np.linalg.norm(xi) - 1) > UNIT_SLACK:
        raise NotUnitError(f"xi must have norm 1 (got {np.linalg.norm(xi):.12g})")
    return xi


def minimal_projection(xi) -> ComplexMatrix:
    """xi xi* for a unit vector xi."""
    xi = _check_unit(xi)
    return np.outer(xi, xi.conj())


def is_minimal_projection(p, tol: Tolerance | None = None) -> bool:
    """Hermitian, idempotent and of trace one, within tolerance."""
    tol = tol or Tolerance()
    p = as_matrix(p, "p")
    if p.shape[0] != p.shape[1]:
        return False
    slack = tol.threshold(1.0)
    return bool(
        np.linalg.norm(p - p.conj().T) <= slack
        and np.linalg.norm(p @ p - p) <= slack
        and abs(np.trace(p) - 1) <= slack
    )


def orthonormal_basis(xi, n: int) -> OrthonormalBasis:
    """x_j = xi e_j*: xi in column j, zeros elsewhere."""
    xi = _check_unit(xi)
    elements = []
    for j in range(n):
        mat = np.zeros((xi.size, n), dtype=np.complex128)
        mat[:, j] = xi
        elements.append(ModuleElement(mat))
    return OrthonormalBasis(xi=xi, elements=elements)


def is_orthonormal_system(elements, tol: Tolerance | None = None) -> bool:
    """Norm one, pairwise vanishing inner products, one common minimal projection."""
    tol = tol or Tolerance()
    elements = [_element(e) for e in elements]
    if not elements:
        return False
    reference = mod_inner(elements[0], elements[0])
    if not is_minimal_projection(reference, tol):
        return False
    for i, x in enumerate(elements):
        if abs(module_norm(x) - 1) > tol.threshold(1.0):
            return False
        if np.linalg.norm(mod_inner(x, x) - reference) > tol.threshold(1.0):
            return False
        for y in elements[i + 1:]:
            if np.linalg.norm(mod_inner(x, y)) > tol.threshold(1.0):
                return False
    return True


def module_parallel(x, y, tol: Tolerance | None = None) -> ParallelVerdict:
    """x || y in the module norm."""
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    return is_parallel(x.mat, y.mat, SPECTRAL, tol)


def _radius_attains(t, target: float, tol: Tolerance) -> bool:
    """w(t) = target, given w(t) <= target."""
    return numerical_radius(t, tol) >= target - tol.threshold(target)


def thm_a_check(x, y, tol: Tolerance | None = None) -> TheoremCheck:
    """x || y against: some unit xi has |[<x,x><x,y> xi, xi]| = ||x||^3 ||y||."""
    tol = tol or Tolerance()
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    nx = module_norm(x)
    if nx == 0.0:
        return TheoremCheck(lhs_parallel=True, rhs_holds=True)

    lhs = module_parallel(x, y, tol).parallel
    t = mod_inner(x, x) @ mod_inner(x, y)
    rhs = _radius_attains(t, nx ** 3 * module_norm(y), tol)
    return TheoremCheck(lhs_parallel=lhs, rhs_holds=rhs)


def thm_L_check(x, y, tol: Tolerance | None = None) -> TheoremCheck:
    """For <x, x> a minimal projection: x || y against w(<x, y>) = ||y||."""
    tol = tol or Tolerance()
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    if not is_minimal_projection(mod_inner(x, x), tol):
        raise NotMinimalError("<x, x> is not a rank-one orthogonal projection")

    lhs = module_parallel(x, y, tol).parallel
    rhs = _radius_attains(mod_inner(x, y), module_norm(y), tol)
    return TheoremCheck(lhs_parallel=lhs, rhs_holds=rhs)


def inner_range_check(x, y, tol: Tolerance | None = None) -> TheoremCheck:
    """x || y against w(<x, y>) = ||x|| ||y||."""
    tol = tol or Tolerance()
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    lhs = module_parallel(x, y, tol).parallel
    rhs = _radius_attains(mod_inner(x, y), module_norm(x) * module_norm(y), tol)
    return TheoremCheck(lhs_parallel=lhs, rhs_holds=rhs)


def _snap_rotation(x: ComplexMatrix, y: ComplexMatrix, lam: complex) -> complex:
    dec = svd(x + lam * y)
    u, v = dec.u[:, 0], dec.v[:, 0]
    px = complex(np.vdot(u, x @ v))
    py = complex(np.vdot(u, y @ v))
    if px == 0 or py == 0:
        return lam
    return (px / abs(px)) * (py.conjugate() / abs(py))


def corollary_idempotent_check(x, y, tol: Tolerance | None = None) -> TheoremCheck:
    """For idempotent <x, x>: x || y against the pair of orthogonality conditions

        x _|_B (||y|| <x,x> x + lambda ||x|| <y,x> x)
        y _|_B (||x|| <y,y> y + lambda ||y|| <y,x> y)

    holding for one unimodular lambda. The lambda search tries the rotation
    opposite to the parallelism maximizer first, then a coarse grid over the
    unit circle, then golden-section refinement around the best grid angle.
    The maximizer is snapped to the phase that aligns u*xv and u*yv at the
    top singular pair of x + lambda* y, which is exact when y is a multiple
    of x.
    """
    tol = tol or Tolerance()
    x, y = _element(x), _element(y)
    _same_shape(x, y)
    pxx = mod_inner(x, x)
    if np.linalg.norm(pxx @ pxx - pxx) > tol.threshold(max(1.0, float(np.linalg.norm(pxx)))):
        raise NotIdempotentError("<x, x> is not idempotent")

    verdict = module_parallel(x, y, tol)
    nx, ny = module_norm(x), module_norm(y)
    if ny == 0.0:
        return TheoremCheck(lhs_parallel=True, rhs_holds=True)

    base_x = ny * (pxx @ x.mat)
    turn_x = nx * (mod_inner(y, x) @ x.mat)
    base_y = nx * (mod_inner(y, y) @ y.mat)
    turn_y = ny * (mod_inner(y, x) @ y.mat)

    def both_orthogonal(lam: complex) -> tuple[bool, float]:
        bx = is_bj_orthogonal(x.mat, base_x + lam * turn_x, SPECTRAL, tol)
        by = is_bj_orthogonal(y.mat, base_y + lam * turn_y, SPECTRAL, tol)
        violation = max(nx - bx.min_value, ny - by.min_value)
        return bx.orthogonal and by.orthogonal, violation

    holds, _ = both_orthogonal(-_snap_rotation(x.mat, y.mat, verdict.lambda_star))
    if holds:
        return TheoremCheck(lhs_parallel=verdict.parallel, rhs_holds=True)

    thetas = unit_circle(tol.grid_points)
    phases = np.exp(1j * thetas)[:, None, None]
    coarse = np.maximum(
        nx - bj_coarse_minima(x.mat, base_x[None] + phases * turn_x[None], SPECTRAL),
        ny - bj_coarse_minima(y.mat, base_y[None] + phases * turn_y[None], SPECTRAL),
    )
    k = int(np.argmin(coarse))
    holds, _ = both_orthogonal(np.exp(1j * thetas[k]))
    if not holds:
        step = 2 * np.pi / tol.grid_points
        best = golden_section_max(
            lambda th: -both_orthogonal(np.exp(1j * th))[1],
            thetas[k] - step,
            thetas[k] + step,
            tol.refine_iters,
        )
        holds, _ = both_orthogonal(np.exp(1j * best.theta))
    logger.debug(f"corollary_idempotent_check: parallel={verdict.parallel} conditions={holds}")
    return TheoremCheck(lhs_parallel=verdict.parallel, rhs_holds=holds)


def _worst_gap(x: ComplexMatrix, basis: OrthonormalBasis, tol: Tolerance) -> float:
    """min over basis elements of (achieved - bound) for x."""
    return min(-is_parallel(x, e.mat, SPECTRAL, tol).gap for e in basis.elements)


def thm_b_search(basis: OrthonormalBasis, trials: int, tol: Tolerance | None = None, seed: int | None = None) -> float:
    """Search for x parallel to every basis element at once.

    Scores `trials` random unit-norm x by min over the basis of
    (||x + lambda* x_j|| - ||x|| - 1), polishes the best with Nelder-Mead,
    and returns the largest score found. A negative result means no x came
    close to parallel to all of them.
    """
    tol = tol or Tolerance()
    if len(basis.elements) < 2:
        raise BadBasisError(f"need an orthonormal basis with n >= 2 (got {len(basis.elements)})")
    if trials < 1:
        raise InputError(f"trials must be positive (got {trials})")
    if seed is None:
        from parallax.config import get_config
        seed = get_config().SEED

    rng = np.random.default_rng(seed)
    d, n = basis.elements[0].d, basis.elements[0].n
    best_x, worst = None, -np.inf
    for _ in range(trials):
        x = random_matrix(rng, d, n)
        x /= module_norm(x)
        score = _worst_gap(x, basis, tol)
        if score > worst:
            best_x, worst = x, score

    def objective(params):
        z = (params[: d * n] + 1j * params[d * n:]).reshape(d, n)
        norm = module_norm(z)
        if norm == 0.0:
            return np.inf
        return -_worst_gap(z / norm, basis, tol)

    if best_x is not None:
        start = np.concatenate([best_x.real.ravel(), best_x.imag.ravel()])
        res = minimize(objective, start, method="Nelder-Mead", options={"maxiter": 40 * d * n, "xatol": 1e-8})
        worst = max(worst, -float(res.fun))
    logger.info(f"thm_b_search: d={d} n={n} trials={trials} worst={worst:.6g}")
    return float(worst)


def transitivity_check(x, y, z, tol: Tolerance | None = None, conclusion_tol: Tolerance | None = None) -> TransitivityCheck:
    """In the dimension-one module (n = 1): x || y and y || z, then x || z.

    y must be a unit vector, so that y y* is a minimal projection.
    `conclusion_tol` may be looser than `tol` for the conclusion.
    """
    tol = tol or Tolerance()
    x, y, z = _element(x), _element(y), _element(z)
    for e in (x, y, z):
        if e.n != 1:
            raise BadDimensionError(f"transitivity needs n = 1 elements (got n = {e.n})")
    _same_shape(x, y)
    _same_shape(y, z)
    _check_unit(y.mat[:, 0])

    premises = module_parallel(x, y, tol).parallel and module_parallel(y, z, tol).parallel
    conclusion = module_parallel(x, z, conclusion_tol or tol).parallel
    if premises and not conclusion:
        logger.warning("transitivity violated")
    return TransitivityCheck(premises=premises, conclusion=conclusion)

"""
Dense complex linear algebra kernels.

Every other module consumes matrices through `as_matrix`, so shapes are
2-D, entries are complex128 and finite.
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import numpy.typing as npt
import scipy.linalg as spla
from scipy.stats import unitary_group

from parallax.errors import (
    InputError,
    NonFiniteError,
    NotHermitianError,
    ShapeMismatchError,
    ZeroMatrixError,
)

logger = logging.getLogger("parallax.linalg")

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]

# Residual bound for factorizations, relative to max(1, scale)
FACTOR_TOL = 1e-10


@dataclass(frozen=True)
class Tolerance:
    """Thresholds and search budgets shared by every decider."""
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8
    grid_points: int = 720
    refine_iters: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InputError(f"abs_tol and rel_tol must be positive (got {self.abs_tol}, {self.rel_tol})")
        if int(self.grid_points) != self.grid_points or self.grid_points < 8:
            raise InputError(f"grid_points must be an integer >= 8 (got {self.grid_points})")
        if int(self.refine_iters) != self.refine_iters or self.refine_iters < 1:
            raise InputError(f"refine_iters must be a positive integer (got {self.refine_iters})")

    def threshold(self, scale: float) -> float:
        """Combined absolute + relative acceptance band for a quantity of size `scale`."""
        return self.abs_tol + self.rel_tol * abs(scale)


@dataclass(frozen=True)
class Svd:
    """Thin SVD A = U diag(s) V* with singular values in descending order."""
    u: ComplexMatrix
    singular_values: npt.NDArray[np.float64]
    v: ComplexMatrix

    @property
    def s1(self) -> float:
        return float(self.singular_values[0]) if self.singular_values.size else 0.0

    def reconstruct(self) -> ComplexMatrix:
        return (self.u * self.singular_values) @ self.v.conj().T


class TopSubspace(NamedTuple):
    """Orthonormal basis of the top left singular space and its image under A*/s1."""
    u1: ComplexMatrix
    v1: ComplexMatrix
    multiplicity: int


def as_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Validate and convert to a finite 2-D complex128 array."""
    arr = np.asarray(a)
    if arr.ndim == 1:
        raise ShapeMismatchError(f"{name} must be 2-D (got a vector of length {arr.shape[0]})")
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ShapeMismatchError(f"{name} must be a nonempty 2-D array (got shape {arr.shape})")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def as_vector(x, name: str = "vector") -> ComplexVector:
    """Validate and convert to a finite nonempty 1-D complex128 array."""
    arr = np.asarray(x).astype(np.complex128, copy=False)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.reshape(-1)
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeMismatchError(f"{name} must be a nonempty vector (got shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.swapaxes(a, -1, -2))


def _fix_phases(u: ComplexMatrix) -> npt.NDArray[np.complex128]:
    """Unimodular factors making the largest-modulus entry of each column real positive."""
    idx = np.argmax(np.abs(u), axis=0)
    lead = u[idx, np.arange(u.shape[1])]
    mod = np.abs(lead)
    phases = np.ones(u.shape[1], dtype=np.complex128)
    nz = mod > 0
    phases[nz] = np.conj(lead[nz]) / mod[nz]
    return phases


def svd(a) -> Svd:
    """Thin SVD with the phase convention: each u-column's largest entry is real positive."""
    a = as_matrix(a)
    u, s, vh = spla.svd(a, full_matrices=False, lapack_driver="gesdd")
    v = vh.conj().T
    # Same phase on u_j and v_j keeps u_j v_j* unchanged
    phases = _fix_phases(u)
    return Svd(u=u * phases, singular_values=s, v=v * phases)


def singular_values(stack: npt.NDArray) -> npt.NDArray[np.float64]:
    """Descending singular values of a matrix or a stack of matrices."""
    return np.linalg.svd(stack, compute_uv=False)


def herm_eig(h) -> tuple[npt.NDArray[np.float64], ComplexMatrix]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues in descending order."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NotHermitianError(f"Hermitian matrix must be square (got shape {h.shape})")
    scale = max(1.0, float(np.linalg.norm(h)))
    if np.linalg.norm(h - h.conj().T) > FACTOR_TOL * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, q = spla.eigh((h + h.conj().T) / 2)
    return w[::-1].copy(), q[:, ::-1] * _fix_phases(q[:, ::-1])


def top_singular_subspace(a, tol: Tolerance | None = None) -> TopSubspace:
    """Basis of the eigenspace of AA* for the largest eigenvalue s1^2.

    The multiplicity counts singular values within rel_tol*s1 of s1, and
    v1 = A* u1 / s1 so that A v1 = s1 u1 column by column.
    """
    tol = tol or Tolerance()
    a = as_matrix(a)
    dec = svd(a)
    s1 = dec.s1
    if s1 == 0.0:
        raise ZeroMatrixError("top singular subspace of the zero matrix is undefined")
    m = int(np.count_nonzero(dec.singular_values >= s1 - tol.rel_tol * s1))
    u1 = dec.u[:, :m]
    v1 = a.conj().T @ u1 / s1
    return TopSubspace(u1=u1, v1=v1, multiplicity=m)


# --- Sampling utilities ---

def unit_circle(points: int, offset: float = 0.0) -> npt.NDArray[np.float64]:
    """Uniform grid of angles in [0, 2*pi)."""
    return offset + 2 * np.pi * np.arange(points) / points


def random_unit_vectors(rng: np.random.Generator, count: int, n: int) -> ComplexMatrix:
    """Rotation-invariant random unit vectors, one per row."""
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_matrix(rng: np.random.Generator, rows: int, cols: int | None = None) -> ComplexMatrix:
    """Complex Gaussian matrix."""
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """Haar-distributed unitary matrix."""
    if n == 1:
        return np.array([[np.exp(2j * np.pi * rng.random())]])
    return unitary_group.rvs(n, random_state=rng)

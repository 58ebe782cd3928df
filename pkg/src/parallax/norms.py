"""
Matrix and vector norms.

Schatten p-norms, Ky-Fan k-norms and operator norms induced by the l1, l2
and l-infinity vector norms, their duals, and the trace inner product
<A, B> = tr(AB*). Norm evaluation works on single matrices and on stacks
(..., rows, cols) so deciders can evaluate whole search grids at once.
"""
import logging
import math
import re
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import numpy.typing as npt

from parallax.errors import BadHandleError, NotSquareError, ParseError, ShapeMismatchError
from parallax.linalg import Tolerance, as_matrix, as_vector, singular_values

logger = logging.getLogger("parallax.norms")


class VectorNormTag(StrEnum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @property
    def ord(self) -> float:
        return {"l1": 1, "l2": 2, "linf": np.inf}[self.value]

    @property
    def dual(self) -> "VectorNormTag":
        return {"l1": VectorNormTag.LINF, "l2": VectorNormTag.L2, "linf": VectorNormTag.L1}[self.value]


class NormKind(StrEnum):
    SCHATTEN = "schatten"
    KYFAN = "kyfan"
    INDUCED = "induced"


@dataclass(frozen=True)
class NormHandle:
    """Selects a matrix norm: Schatten(p), KyFan(k) or Induced(vector norm)."""
    kind: NormKind
    p: float | None = None
    k: int | None = None
    vector: VectorNormTag | None = None

    def __post_init__(self):
        if self.kind == NormKind.SCHATTEN:
            if self.p is None or math.isnan(self.p) or self.p < 1:
                raise BadHandleError(f"Schatten p must be >= 1 (got {self.p})")
        elif self.kind == NormKind.KYFAN:
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise BadHandleError(f"Ky-Fan k must be a positive integer (got {self.k})")
        elif self.vector is None:
            raise BadHandleError("Induced norm needs a vector norm tag")

    @classmethod
    def schatten(cls, p: float) -> "NormHandle":
        return cls(NormKind.SCHATTEN, p=float(p))

    @classmethod
    def kyfan(cls, k: int) -> "NormHandle":
        return cls(NormKind.KYFAN, k=k)

    @classmethod
    def induced(cls, vector: VectorNormTag | str) -> "NormHandle":
        return cls(NormKind.INDUCED, vector=VectorNormTag(vector))

    @classmethod
    def parse(cls, text: str) -> "NormHandle":
        """Parse `schatten:<p|inf>`, `kyfan:<k>` or `induced:<l1|l2|linf>`."""
        m = re.fullmatch(r"\s*(schatten|kyfan|induced)\s*:\s*([A-Za-z0-9.+eE-]+)\s*", text or "")
        if not m:
            raise ParseError(f"Bad norm spec '{text}' (expected schatten:<p|inf>, kyfan:<k>, induced:<l1|l2|linf>)")
        kind, arg = m.group(1), m.group(2).lower()
        try:
            if kind == "schatten":
                return cls.schatten(math.inf if arg in ("inf", "infinity") else float(arg))
            if kind == "kyfan":
                return cls.kyfan(int(arg))
            return cls.induced(arg)
        except ValueError as e:
            raise ParseError(f"Bad norm spec '{text}': {e}") from e

    @property
    def is_unitarily_invariant(self) -> bool:
        return self.kind != NormKind.INDUCED

    def __str__(self) -> str:
        if self.kind == NormKind.SCHATTEN:
            if math.isinf(self.p):
                return "schatten:inf"
            return f"schatten:{self.p:g}"
        if self.kind == NormKind.KYFAN:
            return f"kyfan:{self.k}"
        return f"induced:{self.vector.value}"


SPECTRAL = NormHandle.schatten(math.inf)
TRACE = NormHandle.schatten(1.0)


def check_handle(shape: tuple[int, ...], h: NormHandle):
    """Raise if handle `h` cannot be applied to matrices of this shape."""
    rows, cols = shape[-2], shape[-1]
    if h.kind == NormKind.INDUCED and rows != cols:
        raise NotSquareError(f"induced norms need square matrices (got {rows}x{cols})")
    if h.kind == NormKind.KYFAN and h.k > min(rows, cols):
        raise BadHandleError(f"Ky-Fan k={h.k} exceeds min dimension {min(rows, cols)}")


def _schatten_from_sv(s: npt.NDArray[np.float64], p: float) -> npt.NDArray[np.float64]:
    if math.isinf(p):
        return s[..., 0]
    if p == 1:
        return s.sum(axis=-1)
    # Scale by s1 to keep powers in range
    top = s[..., :1]
    safe = np.where(top > 0, top, 1.0)
    return top[..., 0] * ((s / safe) ** p).sum(axis=-1) ** (1.0 / p)


def norms_of_stack(stack: npt.NDArray, h: NormHandle) -> npt.NDArray[np.float64]:
    """Norm of every matrix in a (..., rows, cols) stack."""
    check_handle(stack.shape, h)
    if h.kind == NormKind.SCHATTEN:
        return _schatten_from_sv(singular_values(stack), h.p)
    if h.kind == NormKind.KYFAN:
        return singular_values(stack)[..., : h.k].sum(axis=-1)
    if h.vector == VectorNormTag.L1:
        return np.abs(stack).sum(axis=-2).max(axis=-1)
    if h.vector == VectorNormTag.LINF:
        return np.abs(stack).sum(axis=-1).max(axis=-1)
    return singular_values(stack)[..., 0]


def matrix_norm(a, h: NormHandle) -> float:
    """The matrix norm selected by `h`.

    Induced(L1) is the maximum absolute column sum, Induced(Linf) the maximum
    absolute row sum, Induced(L2) the largest singular value.
    """
    a = as_matrix(a)
    return float(norms_of_stack(a, h))


def vector_norm(x, v: VectorNormTag) -> float:
    """Standard l1 / l2 / l-infinity norm."""
    return float(np.linalg.norm(as_vector(x), VectorNormTag(v).ord))


def vector_norms_of_stack(stack: npt.NDArray, v: VectorNormTag) -> npt.NDArray[np.float64]:
    return np.linalg.norm(stack, VectorNormTag(v).ord, axis=-1)


def trace_inner(a, b) -> complex:
    """tr(AB*) = sum_ij a_ij conj(b_ij)."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(b, a))


def conjugate_exponent(p: float) -> float:
    """q with 1/p + 1/q = 1."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def dual_norm(a, h: NormHandle, tol: Tolerance | None = None) -> float:
    """max{|tr(AB*)| : ||B||_h <= 1}.

    Schatten(p) is dual to Schatten(q); KyFan(k) is dual to
    max(||A||_inf, ||A||_1 / k). Induced norms have no closed form here and
    go through the sampling oracle, whose value is a lower bound accurate to
    about 1e-3.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"dual norms are defined for square matrices (got {a.shape})")
    check_handle(a.shape, h)
    if h.kind == NormKind.SCHATTEN:
        return matrix_norm(a, NormHandle.schatten(conjugate_exponent(h.p)))
    if h.kind == NormKind.KYFAN:
        s = singular_values(a)
        return float(max(s[0], s.sum() / h.k))

    from parallax.config import default_oracle_config
    from parallax.oracle import oracle_dual_norm

    estimate = oracle_dual_norm(a, h, default_oracle_config())
    logger.debug(f"dual of {h} via oracle: {estimate.value:.6g}")
    return estimate.value

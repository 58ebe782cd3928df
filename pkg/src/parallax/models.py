"""Pydantic models for the parallax JSON surfaces."""

import dataclasses
import enum
import math
from pathlib import Path
from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from parallax.errors import ParseError
from parallax.linalg import ComplexMatrix, Tolerance


# ---------- Matrix Models ----------

class MatrixPayload(BaseModel):
    """Dense complex matrix, row-major, each entry as [re, im]."""
    rows: int
    cols: int
    data: list[tuple[float, float]]

    @model_validator(mode="after")
    def _check_shape(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"rows and cols must be positive (got {self.rows}x{self.cols})")
        if len(self.data) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.data)}")
        if not all(math.isfinite(re) and math.isfinite(im) for re, im in self.data):
            raise ValueError("entries must be finite")
        return self

    @classmethod
    def from_array(cls, a) -> "MatrixPayload":
        a = np.asarray(a, dtype=np.complex128)
        if a.ndim != 2:
            raise ParseError(f"matrix payload needs a 2-D array (got {a.ndim}-D)")
        return cls(
            rows=a.shape[0],
            cols=a.shape[1],
            data=[(float(z.real), float(z.imag)) for z in a.ravel()],
        )

    def to_array(self) -> ComplexMatrix:
        values = np.array(self.data, dtype=np.float64).reshape(self.rows, self.cols, 2)
        return values[..., 0] + 1j * values[..., 1]


def read_matrix(path: Path) -> ComplexMatrix:
    """Load a matrix file in the wire format."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"Cannot read matrix file {path}: {e}") from e
    try:
        return MatrixPayload.model_validate_json(text).to_array()
    except ValidationError as e:
        raise ParseError(f"Bad matrix file {path}: {e.errors()[0]['msg']}") from e


def write_matrix(path: Path, a):
    Path(path).write_text(MatrixPayload.from_array(a).model_dump_json())


# ---------- Settings Models ----------

class ToleranceModel(BaseModel):
    """Tolerance as reported."""
    abs_tol: float
    rel_tol: float
    grid_points: int
    refine_iters: int

    @classmethod
    def from_tolerance(cls, tol: Tolerance) -> "ToleranceModel":
        return cls(**dataclasses.asdict(tol))

    def to_tolerance(self) -> Tolerance:
        return Tolerance(**self.model_dump())


class OracleModel(BaseModel):
    """OracleConfig as reported."""
    lambda_grid: int
    sphere_samples: int
    refine_steps: int
    seed: int

    @classmethod
    def from_config(cls, cfg) -> "OracleModel":
        return cls(**dataclasses.asdict(cfg))

    def to_config(self):
        from parallax.oracle import OracleConfig
        return OracleConfig(**self.model_dump())


# ---------- Job Models ----------

Command = Literal["parallel", "bjo", "certificate", "numrange", "module-verify", "oracle"]
Theorem = Literal["a", "L", "idempotent", "b", "transitive", "inner"]
OracleTarget = Literal["parallel", "radius", "dual"]


class JobRequest(BaseModel):
    """One CLI invocation, after flags and files are parsed."""
    command: Command
    norm: Optional[str] = None
    inputs: list[MatrixPayload] = []
    tolerance: Optional[ToleranceModel] = None
    oracle: Optional[OracleModel] = None
    # numrange
    point: Optional[tuple[float, float]] = None
    boundary: Optional[int] = None
    # module-verify
    theorem: Optional[Theorem] = None
    dims: Optional[tuple[int, int]] = None
    trials: Optional[int] = None
    # oracle
    what: Optional[OracleTarget] = None


class JobReport(BaseModel):
    """Structured result of one job; exit_code is 0 (holds), 1 (fails) or 2 (error)."""
    command: str
    norm: Optional[str] = None
    holds: Optional[bool] = None
    exit_code: int
    result: dict[str, Any] = {}
    tolerance: Optional[ToleranceModel] = None
    oracle: Optional[OracleModel] = None
    elapsed_seconds: Optional[float] = None
    error: Optional[str] = None


# ---------- Encoding ----------

def encode(value) -> Any:
    """Convert results into JSON-compatible data.

    Complex numbers become [re, im], 2-D arrays become matrix payloads,
    dataclasses and named tuples become objects.
    """
    from parallax.norms import NormHandle

    if isinstance(value, enum.Enum):
        return value.value
    if value is None or isinstance(value, (bool, str, int)):
        return value
    if isinstance(value, NormHandle):
        return str(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.ndarray):
        if value.ndim == 0:
            return encode(value.item())
        if value.ndim == 2:
            return MatrixPayload.from_array(value).model_dump()
        return [encode(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, tuple) and hasattr(value, "_fields"):
        return {name: encode(getattr(value, name)) for name in value._fields}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"Cannot encode {type(value).__name__}")

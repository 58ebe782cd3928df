"""
Brute-force reference implementations.

Every fast decider is cross-checked against these: a dense lambda grid for
parallelism, unit-sphere sampling for the numerical radius and operator-norm
witnesses, and random search over a norm ball for dual norms. Sampled values
are attained by actual vectors or matrices, so they are lower bounds of the
true maxima.

Sampling is split into shards, each drawing from its own substream spawned
from `OracleConfig.seed`; results are bit-identical for a fixed seed.
"""
import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from parallax.errors import InputError, NotSquareError, ShapeMismatchError
from parallax.geometry import ParallelVerdict, circle_profile, make_verdict
from parallax.linalg import (
    ComplexVector,
    Tolerance,
    as_matrix,
    random_unit_vectors,
    unit_circle,
)
from parallax.norms import NormHandle, check_handle, matrix_norm, norms_of_stack

logger = logging.getLogger("parallax.oracle")

# Samples drawn per shard substream
SHARD_SIZE = 4096

# Perturbations evaluated per hill-climbing round
POPULATION = 48


def _default_seed() -> int:
    from parallax.config import get_config
    return get_config().SEED


@dataclass(frozen=True)
class OracleConfig:
    """Search budgets for the brute-force oracles."""
    lambda_grid: int = 4096
    sphere_samples: int = 20000
    refine_steps: int = 100
    seed: int = field(default_factory=_default_seed)

    def __post_init__(self):
        for name in ("lambda_grid", "sphere_samples", "refine_steps"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InputError(f"{name} must be a positive integer (got {value})")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer (got {self.seed})")


@dataclass(frozen=True)
class DualNormEstimate:
    """Sampled lower bound of a dual norm.

    `trace` holds the best value after sampling and after each improving
    polish round.
    """
    value: float
    trace: list[float]


def shard_rngs(seed: int, total: int) -> list[tuple[np.random.Generator, int]]:
    """(generator, sample count) per shard, one spawned substream each."""
    counts = [SHARD_SIZE] * (total // SHARD_SIZE)
    if total % SHARD_SIZE:
        counts.append(total % SHARD_SIZE)
    children = np.random.SeedSequence(seed).spawn(len(counts) + 1)
    return [(np.random.default_rng(child), count) for child, count in zip(children, counts)]


def polish_rng(seed: int, total: int) -> np.random.Generator:
    """Substream reserved for the local polish, after all sampling shards."""
    shards = -(-total // SHARD_SIZE)
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(shards + 1)[-1])


def hill_climb(
    score: Callable[[npt.NDArray], npt.NDArray[np.float64]],
    start: npt.NDArray,
    start_value: float,
    rounds: int,
    rng: np.random.Generator,
    project: Callable[[npt.NDArray], npt.NDArray] = lambda z: z,
    step: float = 0.25,
) -> tuple[npt.NDArray, float, list[float]]:
    """Gradient-free local ascent from `start`.

    Each round scores POPULATION complex Gaussian perturbations of the
    current point; the best one is taken when it improves, growing the step,
    otherwise the step halves.

    Returns:
        (best point, best value, value after every improving round)
    """
    best, best_value = start, float(start_value)
    scale = max(float(np.linalg.norm(start)), 1e-300)
    trace = []
    for _ in range(rounds):
        noise = rng.standard_normal((POPULATION, *start.shape)) + 1j * rng.standard_normal((POPULATION, *start.shape))
        candidates = project(best[None] + (step * scale / np.sqrt(2 * start.size)) * noise)
        values = score(candidates)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best, best_value = candidates[k], float(values[k])
            trace.append(best_value)
            step *= 1.5
        else:
            step *= 0.5
        if step < 1e-12:
            break
    return best, best_value, trace


def oracle_parallel(a, b, h: NormHandle, cfg: OracleConfig | None = None, tol: Tolerance | None = None) -> ParallelVerdict:
    """Parallelism by dense lambda grid plus ternary refinement."""
    cfg = cfg or OracleConfig()
    tol = tol or Tolerance()
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")
    check_handle(a.shape, h)

    na = matrix_norm(a, h)
    nb = matrix_norm(b, h)
    if nb == 0.0:
        return make_verdict(1.0, na, na, tol)

    thetas = unit_circle(cfg.lambda_grid)
    values = circle_profile(a, b, h, thetas)
    k = int(np.argmax(values))
    best_theta, best_value = float(thetas[k]), float(values[k])

    def g(theta: float) -> float:
        return float(circle_profile(a, b, h, np.array([theta]))[0])

    step = 2 * np.pi / cfg.lambda_grid
    lo, hi = best_theta - step, best_theta + step
    for _ in range(cfg.refine_steps):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if g(m1) < g(m2):
            lo = m1
        else:
            hi = m2
    mid = (lo + hi) / 2
    value = g(mid)
    if value > best_value:
        best_theta, best_value = float(np.mod(mid, 2 * np.pi)), value

    return make_verdict(np.exp(1j * best_theta), best_value, na + nb, tol)


def _quadratic_form_moduli(t: npt.NDArray, xis: npt.NDArray) -> npt.NDArray[np.float64]:
    return np.abs(np.einsum("ki,ij,kj->k", xis.conj(), t, xis))


def _unit_rows(z: npt.NDArray) -> npt.NDArray:
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def oracle_numerical_radius(t, cfg: OracleConfig | None = None) -> float:
    """max |[t xi, xi]| over sampled unit xi, then local polish."""
    cfg = cfg or OracleConfig()
    t = as_matrix(t, "t")
    if t.shape[0] != t.shape[1]:
        raise NotSquareError(f"t must be square (got {t.shape[0]}x{t.shape[1]})")
    if not np.any(t):
        return 0.0

    n = t.shape[0]
    best, best_value = None, -1.0
    for rng, count in shard_rngs(cfg.seed, cfg.sphere_samples):
        xis = random_unit_vectors(rng, count, n)
        values = _quadratic_form_moduli(t, xis)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best, best_value = xis[k], float(values[k])

    _, best_value, _ = hill_climb(
        lambda xs: _quadratic_form_moduli(t, xs),
        best,
        best_value,
        cfg.refine_steps,
        polish_rng(cfg.seed, cfg.sphere_samples),
        project=_unit_rows,
    )
    logger.debug(f"oracle_numerical_radius: {best_value:.12g}")
    return best_value


def oracle_opnorm_witness(a, cfg: OracleConfig | None = None) -> tuple[float, ComplexVector]:
    """Sampled lower bound of ||a||_inf and the unit vector attaining it."""
    cfg = cfg or OracleConfig()
    a = as_matrix(a, "a")
    n = a.shape[1]

    def score(ys):
        return np.linalg.norm(ys @ a.T, axis=-1)

    best, best_value = None, -1.0
    for rng, count in shard_rngs(cfg.seed, cfg.sphere_samples):
        ys = random_unit_vectors(rng, count, n)
        values = score(ys)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best, best_value = ys[k], float(values[k])

    best, best_value, _ = hill_climb(
        score, best, best_value, cfg.refine_steps, polish_rng(cfg.seed, cfg.sphere_samples), project=_unit_rows
    )
    return best_value, best


def oracle_dual_norm(a, h: NormHandle, cfg: OracleConfig | None = None) -> DualNormEstimate:
    """max |tr(A B*)| / ||B||_h over sampled B, then local polish.

    Half of each shard is dense complex Gaussian, half is masked to a random
    sparsity pattern so that the vertices of polyhedral balls are reachable.
    """
    cfg = cfg or OracleConfig()
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"dual norms are defined for square matrices (got {a.shape})")
    check_handle(a.shape, h)
    if not np.any(a):
        return DualNormEstimate(value=0.0, trace=[0.0])

    def score(bs):
        norms = norms_of_stack(bs, h)
        pairing = np.abs(np.einsum("ij,kij->k", a, bs.conj()))
        return np.where(norms > 0, pairing / np.where(norms > 0, norms, 1.0), 0.0)

    n = a.shape[0]
    best, best_value = None, -1.0
    for rng, count in shard_rngs(cfg.seed, cfg.sphere_samples):
        bs = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
        mask = rng.random((count, n, n)) < 0.3
        bs[count // 2:] *= mask[count // 2:]
        values = score(bs)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best, best_value = bs[k], float(values[k])

    trace = [best_value]
    _, best_value, improvements = hill_climb(
        score, best, best_value, cfg.refine_steps, polish_rng(cfg.seed, cfg.sphere_samples)
    )
    trace.extend(improvements)
    logger.debug(f"oracle_dual_norm[{h}]: {best_value:.12g} after {len(improvements)} improving rounds")
    return DualNormEstimate(value=best_value, trace=trace)

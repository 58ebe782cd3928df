"""
Scalar search on the unit circle.

Uniform grid evaluation followed by golden-section refinement of the best
bracket. The objectives here (norms of A + e^{i theta} B, support functions)
can be non-smooth where singular values or eigenvalues cross, so no
derivatives are used.
"""
import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from parallax.linalg import unit_circle

invphi = (math.sqrt(5) - 1) / 2  # 1 / phi
invphi2 = (3 - math.sqrt(5)) / 2  # 1 / phi^2

VectorizedObjective = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


class CircleMax(NamedTuple):
    theta: float
    value: float


def golden_section_max(f: Callable[[float], float], a: float, b: float, iters: int) -> CircleMax:
    """Golden-section search for the maximum of a unimodal f on [a, b].

    Reuses one function evaluation per iteration; returns the better of the
    two final interior points.
    """
    (a, b) = (min(a, b), max(a, b))
    h = b - a
    c = a + invphi2 * h
    d = a + invphi * h
    yc = f(c)
    yd = f(d)

    for _ in range(iters):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = invphi * h
            c = a + invphi2 * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = invphi * h
            d = a + invphi * h
            yd = f(d)

    if yc > yd:
        return CircleMax(c, yc)
    return CircleMax(d, yd)


def maximize_periodic(f: VectorizedObjective, grid_points: int, refine_iters: int) -> CircleMax:
    """Maximize a 2*pi-periodic function given in vectorized form.

    `f` maps an array of angles to an array of values. The grid best is
    refined inside [theta_{k-1}, theta_{k+1}]; the refined point only
    replaces the grid point when it is strictly better.
    """
    thetas = unit_circle(grid_points)
    values = np.asarray(f(thetas), dtype=np.float64)
    k = int(np.argmax(values))
    best = CircleMax(float(thetas[k]), float(values[k]))

    step = 2 * np.pi / grid_points
    refined = golden_section_max(
        lambda t: float(f(np.array([t]))[0]),
        best.theta - step,
        best.theta + step,
        refine_iters,
    )
    if refined.value > best.value:
        best = CircleMax(float(np.mod(refined.theta, 2 * np.pi)), refined.value)
    return best


def minimize_periodic(f: VectorizedObjective, grid_points: int, refine_iters: int) -> CircleMax:
    """Minimize a 2*pi-periodic function; see `maximize_periodic`."""
    found = maximize_periodic(lambda t: -np.asarray(f(t)), grid_points, refine_iters)
    return CircleMax(found.theta, -found.value)

"""Deterministic quadrature over the unit sphere with the uniform measure
dn = sin(theta) dtheta dphi / (4 pi)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

__all__ = [
    "QuadratureError",
    "SphereGrid",
    "RefinementResult",
    "build_grid",
    "integrate",
    "integrate_with_refinement",
    "weighted_node_sum",
]

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


class QuadratureError(RuntimeError):
    """A node evaluation produced a non-finite value."""


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Product quadrature grid: Gauss-Legendre nodes in cos(theta) crossed with
    equally spaced azimuth nodes of equal weight.

    All node arrays are flat and aligned; weights sum to 1 so that integrating
    the constant 1 returns 1 exactly.
    """

    theta: np.ndarray
    phi: np.ndarray
    cos_theta: np.ndarray
    sin_theta: np.ndarray
    weights: np.ndarray
    order_theta: int
    order_phi: int

    def __post_init__(self):
        for name in ("theta", "phi", "cos_theta", "sin_theta", "weights"):
            arr = getattr(self, name)
            arr.flags.writeable = False

    def __len__(self) -> int:
        return self.theta.size

    @property
    def orders(self) -> Tuple[int, int]:
        return (self.order_theta, self.order_phi)


def build_grid(order_theta: int, order_phi: int) -> SphereGrid:
    """Build the product grid with ``order_theta`` polar and ``order_phi`` azimuthal nodes.

    The polar rule integrates polynomials in cos(theta) up to degree
    2*order_theta - 1 exactly; the azimuthal rule integrates trigonometric
    polynomials of harmonic order below ``order_phi`` exactly.
    """
    if int(order_theta) != order_theta or int(order_phi) != order_phi:
        raise ValueError("grid orders must be integers")
    order_theta = int(order_theta)
    order_phi = int(order_phi)
    if order_theta < 2:
        raise ValueError(f"order_theta must be at least 2, got {order_theta}")
    if order_phi < 4:
        raise ValueError(f"order_phi must be at least 4, got {order_phi}")

    u, w = np.polynomial.legendre.leggauss(order_theta)
    phi_line = 2.0 * math.pi * np.arange(order_phi) / order_phi

    cos_theta = np.repeat(u, order_phi)
    sin_theta = np.sqrt(np.maximum(1.0 - cos_theta * cos_theta, 0.0))
    theta = np.arccos(cos_theta)
    phi = np.tile(phi_line, order_theta)
    # Gauss-Legendre weights sum to 2 on [-1, 1]; the 1/2 absorbs the measure
    # normalization and 1/order_phi the azimuth average.
    weights = np.repeat(w, order_phi) * (0.5 / order_phi)

    return SphereGrid(
        theta=theta,
        phi=phi,
        cos_theta=cos_theta,
        sin_theta=sin_theta,
        weights=weights,
        order_theta=order_theta,
        order_phi=order_phi,
    )


def weighted_node_sum(weights: np.ndarray, values: np.ndarray) -> float:
    """Compensated sum of weights*values in fixed node-index order.

    The reduction order never depends on how the values were produced, so a
    caller may evaluate nodes in parallel without changing the result.
    """
    return math.fsum(np.multiply(weights, values).tolist())


def integrate(grid: SphereGrid, f: Integrand) -> float:
    """Integrate ``f`` against the uniform sphere measure on ``grid``.

    ``f`` receives the full (theta, phi) node arrays and must return the
    integrand values per node.  A non-finite value raises QuadratureError
    identifying the offending node.
    """
    values = np.asarray(f(grid.theta, grid.phi), dtype=float)
    if values.shape != grid.theta.shape:
        raise ValueError(
            f"integrand returned shape {values.shape}, expected {grid.theta.shape}"
        )
    if not np.all(np.isfinite(values)):
        index = int(np.flatnonzero(~np.isfinite(values))[0])
        raise QuadratureError(
            f"integrand is not finite at node {index} "
            f"(theta={grid.theta[index]!r}, phi={grid.phi[index]!r})"
        )
    return weighted_node_sum(grid.weights, values)


@dataclass(frozen=True)
class RefinementResult:
    value: float
    error_estimate: float
    base_orders: Tuple[int, int]
    refined_orders: Tuple[int, int]


def integrate_with_refinement(
    f: Integrand, base_orders: Tuple[int, int], factor: int = 2
) -> RefinementResult:
    """Integrate on a base grid and on one refined by ``factor`` in both orders.

    Returns the refined value together with the absolute difference between
    the two as a self-consistency error estimate.
    """
    if factor < 2:
        raise ValueError(f"refinement factor must be at least 2, got {factor}")
    order_theta, order_phi = base_orders
    base = integrate(build_grid(order_theta, order_phi), f)
    refined = integrate(build_grid(order_theta * factor, order_phi * factor), f)
    return RefinementResult(
        value=refined,
        error_estimate=abs(refined - base),
        base_orders=(order_theta, order_phi),
        refined_orders=(order_theta * factor, order_phi * factor),
    )

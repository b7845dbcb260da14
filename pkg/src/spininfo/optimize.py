"""Constrained maximization of the measurement information over the reduced
(weight, angle) parameters: the analytic stationary solution, curvature checks,
and an independent numeric search used as a cross-check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .information import (
    _info_theta_fast,
    bound_theta,
    h_derivative,
    h_function,
    info_theta,
)
from .povm import ReducedMeasurement
from .quadrature import SphereGrid

__all__ = [
    "OBJECTIVES",
    "OptimizationResult",
    "solve_stationarity",
    "hessian_diagonal",
    "numeric_maximize",
    "parallel_map",
    "verify_info_h_decreasing",
]

OBJECTIVES = ("I", "J")

_THETA_MARGIN = 1e-6  # keep iterates strictly inside (0, pi)


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of a constrained maximization over the reduced parameters.

    ``theta_opt`` is the common (or weight-averaged) opening angle and
    ``stationarity_residual`` the spread of the stationarity function across
    outcomes, which vanishes at an exact stationary point.  ``history`` holds
    (weights, thetas) snapshots of the iterates for numeric searches.
    """

    theta_opt: float
    thetas: tuple[float, ...]
    weights: tuple[float, ...]
    objective_bits: float
    objective_kind: str
    hessian_diag: tuple[float, ...]
    stationarity_residual: float
    constraint_residual: float
    converged: bool
    history: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] = field(default=())


def _check_objective(objective: str) -> str:
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")
    return objective


def verify_info_h_decreasing(grid: SphereGrid, points: int = 500) -> np.ndarray:
    """Numerically confirm that the stationarity function of the information curve
    is strictly decreasing on the open interval.

    The analytic bound comes with a closed-form proof of this monotonicity;
    the information curve itself does not, so the property is established on a
    finite-difference sample before the stationarity argument relies on it.
    Raises RuntimeError with a diagnostic if a violation shows up.
    """
    ts = np.linspace(0.01, math.pi - 0.01, points + 2)
    values = _info_theta_fast(ts, grid, "antiparallel")
    step = ts[1] - ts[0]
    slopes = (values[2:] - values[:-2]) / (2.0 * step)
    h_values = slopes / np.sin(ts[1:-1])
    increases = np.diff(h_values)
    if not np.all(increases < 0.0):
        worst = int(np.argmax(increases))
        raise RuntimeError(
            "information stationarity function is not strictly decreasing: "
            f"rise {increases[worst]:.3e} near theta={ts[1 + worst]:.6f}"
        )
    return h_values


def _objective_values(thetas: np.ndarray, objective: str, grid: SphereGrid) -> np.ndarray:
    if objective == "J":
        from .information import _bound_array

        return _bound_array(thetas)
    return _info_theta_fast(thetas, grid, "antiparallel")


def _objective_slopes(
    thetas: np.ndarray, objective: str, grid: SphereGrid, fd_step: float = 1e-4
) -> np.ndarray:
    if objective == "J":
        return np.sin(thetas) * np.array([h_function(t) for t in thetas])
    lo = np.clip(thetas - fd_step, 0.0, math.pi)
    hi = np.clip(thetas + fd_step, 0.0, math.pi)
    values = _info_theta_fast(np.concatenate([hi, lo]), grid, "antiparallel")
    n = thetas.size
    return (values[:n] - values[n:]) / (hi - lo)


def solve_stationarity(M: int, objective: str, grid: SphereGrid) -> OptimizationResult:
    """Analytic solution of the constrained maximization for ``M`` outcomes.

    The stationarity conditions force a common value of the per-outcome
    stationarity function; since that function is strictly decreasing (proved
    in closed form for the bound, checked numerically for the information
    curve), all opening angles coincide, and the zero-sum weighted-cosine
    constraint then pins them to pi/2.  The weights are degenerate at the
    solution; the uniform choice summing to 4 is reported.
    """
    _check_objective(objective)
    if M < 4:
        raise ValueError(f"a complete measurement needs at least 4 outcomes, got M={M}")
    if objective == "J":
        interior = np.linspace(0.01, math.pi - 0.01, 500)
        if not all(h_derivative(t) < 0.0 for t in interior):
            raise RuntimeError("bound stationarity function failed its monotonicity check")
    else:
        verify_info_h_decreasing(grid)

    theta_opt = 0.5 * math.pi
    weights = tuple(4.0 / M for _ in range(M))
    if objective == "J":
        per_angle = bound_theta(theta_opt)
    else:
        per_angle = info_theta(theta_opt, grid)
    measurement = ReducedMeasurement(tuple((w, theta_opt) for w in weights))
    hess = hessian_diagonal(measurement, objective, grid)
    constraint = abs(math.fsum(w * math.cos(theta_opt) for w in weights))
    return OptimizationResult(
        theta_opt=theta_opt,
        thetas=(theta_opt,) * M,
        weights=weights,
        objective_bits=4.0 * per_angle,
        objective_kind=objective,
        hessian_diag=tuple(hess),
        stationarity_residual=0.0,
        constraint_residual=constraint,
        converged=True,
    )


def hessian_diagonal(
    measurement: ReducedMeasurement,
    objective: str,
    grid: SphereGrid,
    fd_step: float = 5e-3,
) -> list[float]:
    """Diagonal of the objective Hessian with respect to the opening angles.

    The objective is a weighted sum over outcomes, so the Hessian is diagonal.
    For the bound the second derivative is analytic (the slope is
    sin(theta)*h(theta), so the curvature is cos(theta)*h + sin(theta)*h');
    for the information curve a central second difference is used.
    """
    _check_objective(objective)
    entries: list[float] = []
    if objective == "J":
        for weight, theta in measurement.pairs:
            entries.append(
                weight * (math.cos(theta) * h_function(theta) + math.sin(theta) * h_derivative(theta))
            )
        return entries
    thetas = np.asarray(measurement.thetas)
    stacked = np.concatenate([thetas - fd_step, thetas, thetas + fd_step])
    values = _info_theta_fast(stacked, grid, "antiparallel")
    n = thetas.size
    second = (values[2 * n :] - 2.0 * values[n : 2 * n] + values[:n]) / fd_step**2
    for weight, curvature in zip(measurement.weights, second):
        entries.append(weight * float(curvature))
    return entries


def parallel_map(measurement: ReducedMeasurement) -> ReducedMeasurement:
    """Map reduced parameters between the antiparallel and parallel ensembles:
    every opening angle is replaced by its supplement, weights are unchanged."""
    return ReducedMeasurement(
        tuple((w, math.pi - t) for w, t in measurement.pairs)
    )


def _softmax(a: np.ndarray) -> np.ndarray:
    shifted = np.exp(a - np.max(a))
    return shifted / np.sum(shifted)


def _restore_feasibility(
    weights: np.ndarray, thetas: np.ndarray, tol: float = 1e-13
) -> Optional[np.ndarray]:
    """Newton-adjust the angles along the constraint gradient until the weighted
    cosines sum to zero.  Returns the adjusted angles, or None if the correction
    stalls (e.g. all angles pinned at the interval ends)."""
    out = thetas.copy()
    for _ in range(50):
        residual = float(weights @ np.cos(out))
        if abs(residual) <= tol:
            return out
        direction = weights * np.sin(out)
        slope = float(direction @ direction)
        if slope < 1e-14:
            return None
        out = out + (residual / slope) * direction
        np.clip(out, _THETA_MARGIN, math.pi - _THETA_MARGIN, out=out)
    return None


def _feasible_start(
    M: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Random point of the feasible region: softmax weights summing to 4, angles
    shifted in common until the weighted cosines vanish."""
    log_weights = rng.normal(scale=0.4, size=M)
    weights = 4.0 * _softmax(log_weights)
    thetas = rng.uniform(0.4, math.pi - 0.4, size=M)
    lo, hi = -math.pi, math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        shifted = np.clip(thetas + mid, _THETA_MARGIN, math.pi - _THETA_MARGIN)
        if float(weights @ np.cos(shifted)) > 0.0:
            lo = mid
        else:
            hi = mid
    shifted = np.clip(thetas + 0.5 * (lo + hi), _THETA_MARGIN, math.pi - _THETA_MARGIN)
    restored = _restore_feasibility(weights, shifted)
    if restored is None:
        raise RuntimeError("failed to build a random feasible starting point")
    return log_weights, restored


def numeric_maximize(
    M: int,
    objective: str,
    grid: SphereGrid,
    seed: int,
    max_iterations: int = 10_000,
    tol: float = 1e-10,
    patience: int = 50,
) -> OptimizationResult:
    """Projected-ascent search over the feasible region from a seeded random start.

    Weights are parameterized through a softmax map scaled to sum 4 (keeping
    them strictly positive) and angles through a scaled sigmoid (keeping them
    strictly inside the interval); every accepted step is followed by a Newton
    restoration of the zero-sum weighted-cosine constraint, so all recorded
    iterates are feasible.  The search stops when the objective has changed by
    less than ``tol`` for ``patience`` consecutive accepted steps, and reports
    non-convergence (with the best iterate) if the iteration cap is hit first.
    """
    _check_objective(objective)
    if M < 4:
        raise ValueError(f"a complete measurement needs at least 4 outcomes, got M={M}")
    rng = np.random.default_rng(seed)
    log_weights, thetas = _feasible_start(M, rng)

    def to_logit(t: np.ndarray) -> np.ndarray:
        return np.log(t / (math.pi - t))

    def from_logit(b: np.ndarray) -> np.ndarray:
        return math.pi / (1.0 + np.exp(-b))

    a = log_weights
    b = to_logit(thetas)

    def evaluate(a_vec: np.ndarray, b_vec: np.ndarray):
        weights = 4.0 * _softmax(a_vec)
        angles = _restore_feasibility(weights, from_logit(b_vec))
        if angles is None:
            return None
        value = float(weights @ _objective_values(angles, objective, grid))
        return value, weights, angles

    state = evaluate(a, b)
    if state is None:
        raise RuntimeError("random feasible start could not be evaluated")
    value, weights, angles = state

    history = [(tuple(weights), tuple(angles))]
    step = 0.5
    stall = 0
    converged = False
    iterations = 0

    while iterations < max_iterations:
        iterations += 1
        gains = _objective_values(angles, objective, grid)
        slopes = _objective_slopes(angles, objective, grid)
        sigma = weights / 4.0
        cos_a = np.cos(angles)
        chain = angles * (math.pi - angles) / math.pi  # d(theta)/d(logit)
        # objective gradient in the (softmax, logit) parameters
        grad_a = 4.0 * sigma * (gains - float(gains @ sigma))
        grad_b = weights * slopes * chain
        # constraint gradient in the same parameters; project the step onto its
        # tangent so ascent and feasibility restoration do not fight each other
        normal_a = 4.0 * sigma * (cos_a - float(cos_a @ sigma))
        normal_b = -weights * np.sin(angles) * chain
        norm_sq = float(normal_a @ normal_a + normal_b @ normal_b)
        if norm_sq > 1e-18:
            coef = float(grad_a @ normal_a + grad_b @ normal_b) / norm_sq
            grad_a = grad_a - coef * normal_a
            grad_b = grad_b - coef * normal_b

        gradient_norm = math.sqrt(float(grad_a @ grad_a + grad_b @ grad_b))
        if gradient_norm < 1e-13:
            converged = True
            break

        improved = False
        for _ in range(60):
            trial = evaluate(a + step * grad_a, b + step * grad_b)
            if trial is not None and trial[0] > value:
                improvement = trial[0] - value
                a = a + step * grad_a
                b = to_logit(trial[2])
                value, weights, angles = trial
                history.append((tuple(weights), tuple(angles)))
                step = min(step * 1.3, 1e6)
                stall = stall + 1 if improvement < tol else 0
                improved = True
                break
            step *= 0.5
            if step < 1e-14:
                break
        if not improved:
            converged = True
            break
        if stall >= patience:
            converged = True
            break

    constraint = abs(float(weights @ np.cos(angles)))
    measurement = ReducedMeasurement(tuple(zip(weights.tolist(), angles.tolist())))
    hess = hessian_diagonal(measurement, objective, grid)
    station = _stationarity_spread(angles, objective, grid)
    theta_opt = float(weights @ angles / 4.0)
    return OptimizationResult(
        theta_opt=theta_opt,
        thetas=tuple(float(t) for t in angles),
        weights=tuple(float(w) for w in weights),
        objective_bits=value,
        objective_kind=objective,
        hessian_diag=tuple(hess),
        stationarity_residual=station,
        constraint_residual=constraint,
        converged=converged and constraint <= 1e-9,
        history=tuple(history),
    )


def _stationarity_spread(thetas: np.ndarray, objective: str, grid: SphereGrid) -> float:
    """Spread (max - min) of the per-outcome stationarity function; zero when the
    first-order conditions hold exactly."""
    slopes = _objective_slopes(np.asarray(thetas), objective, grid)
    h_values = slopes / np.sin(np.asarray(thetas))
    return float(np.max(h_values) - np.min(h_values))

"""Probability and information functionals: Born-rule outcome probabilities,
posteriors, Kullback-Leibler terms, mutual information for arbitrary POVMs,
and the reduced one-angle information curve with its Jensen upper bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .geometry import (
    ANTIPARALLEL,
    PARALLEL,
    SphericalDirection,
    check_ensemble_kind,
    signal_state,
)
from .povm import Povm, PovmElement, ReducedMeasurement
from .quadrature import SphereGrid, build_grid, weighted_node_sum

__all__ = [
    "DegenerateOutcomeError",
    "OutcomeTerm",
    "InfoReport",
    "conditional_probability",
    "outcome_probability",
    "reduced_outcome_probability",
    "posterior_density",
    "mutual_information",
    "info_theta",
    "info_theta_batch",
    "bound_theta",
    "h_function",
    "h_derivative",
    "reduced_info",
    "reduced_bound",
]

LN2 = math.log(2.0)

# Below this, an outcome probability is treated as zero: the outcome is
# flagged and contributes no information instead of poisoning the logs.
DEGENERATE_PROBABILITY = 1e-15

# x*log2(x) is evaluated as 0 below this floor (the x -> 0+ limit).
_XLOG_FLOOR = 1e-300


class DegenerateOutcomeError(ValueError):
    """An outcome with (numerically) zero probability has no posterior."""


@dataclass(frozen=True)
class OutcomeTerm:
    """Per-outcome contribution: prior probability and information gain in bits."""

    probability: float
    kl_bits: float
    degenerate: bool = False


@dataclass(frozen=True)
class InfoReport:
    """Mutual information of a measurement together with its per-outcome breakdown."""

    mutual_information_bits: float
    per_outcome: tuple[OutcomeTerm, ...]
    grid_orders: Tuple[int, int]
    error_estimate: float


def _xlog2x(values: np.ndarray) -> np.ndarray:
    """x*log2(x) elementwise with the 0*log(0) = 0 convention."""
    safe = np.maximum(values, _XLOG_FLOOR)
    return np.where(values > _XLOG_FLOOR, values * (np.log(safe) / LN2), 0.0)


def _signal_components(cos_theta: np.ndarray, phi: np.ndarray, kind: str) -> np.ndarray:
    """Amplitudes of the signal state per node, shape (4, n).

    Built from the half-angle components of the spin along the node direction
    and (for the antiparallel ensemble) of the spin along its antipode.
    """
    cos_half = np.sqrt(0.5 * (1.0 + cos_theta))
    sin_half = np.sqrt(0.5 * (1.0 - cos_theta))
    phase = np.exp(1j * phi)
    up1 = cos_half
    down1 = phase * sin_half
    if kind == ANTIPARALLEL:
        up2 = sin_half
        down2 = -phase * cos_half
    else:
        up2 = up1
        down2 = down1
    return np.stack([up1 * up2, up1 * down2, down1 * up2, down1 * down2])


def _conditional_values(element: PovmElement, grid: SphereGrid, kind: str) -> np.ndarray:
    signal = _signal_components(grid.cos_theta, grid.phi, kind)
    overlap = element.state.as_array() @ np.conj(signal)
    return element.weight * np.abs(overlap) ** 2


def conditional_probability(
    element: PovmElement, direction: SphericalDirection, kind: str = ANTIPARALLEL
) -> float:
    """Born-rule probability of the outcome given the encoded direction:
    weight * |<signal(direction)|state>|^2."""
    check_ensemble_kind(kind)
    signal = signal_state(direction, kind)
    amplitude = signal.overlap(element.state)
    return element.weight * float(abs(amplitude) ** 2)


def outcome_probability(element: PovmElement, grid: SphereGrid, kind: str = ANTIPARALLEL) -> float:
    """Prior outcome probability: the conditional probability averaged over the sphere."""
    check_ensemble_kind(kind)
    return weighted_node_sum(grid.weights, _conditional_values(element, grid, kind))


def reduced_outcome_probability(weight: float, theta_r: float) -> float:
    """Closed-form prior probability of a reduced antiparallel-ensemble outcome:
    weight * (3 - cos(theta_r)) / 12."""
    return weight * (3.0 - math.cos(theta_r)) / 12.0


def _reduced_mean(weight: float, theta_r: float, kind: str) -> float:
    if kind == ANTIPARALLEL:
        return reduced_outcome_probability(weight, theta_r)
    return weight * (3.0 + math.cos(theta_r)) / 12.0


def posterior_density(
    element: PovmElement,
    direction: SphericalDirection,
    grid: SphereGrid,
    kind: str = ANTIPARALLEL,
) -> float:
    """Bayes posterior density of the direction given the outcome, relative to the
    uniform prior density 1."""
    prior = outcome_probability(element, grid, kind)
    if prior < DEGENERATE_PROBABILITY:
        raise DegenerateOutcomeError(
            f"outcome probability {prior!r} is numerically zero; posterior undefined"
        )
    return conditional_probability(element, direction, kind) / prior


def _information_terms(
    povm: Povm, grid: SphereGrid, kind: str
) -> tuple[float, tuple[OutcomeTerm, ...]]:
    signal = _signal_components(grid.cos_theta, grid.phi, kind)
    signal_conj = np.conj(signal)
    terms = []
    for element in povm.elements:
        conditional = element.weight * np.abs(element.state.as_array() @ signal_conj) ** 2
        probability = weighted_node_sum(grid.weights, conditional)
        if probability < DEGENERATE_PROBABILITY:
            terms.append(OutcomeTerm(probability=probability, kl_bits=0.0, degenerate=True))
            continue
        kl_bits = weighted_node_sum(grid.weights, _xlog2x(conditional / probability))
        terms.append(OutcomeTerm(probability=probability, kl_bits=kl_bits))
    total = math.fsum(t.probability * t.kl_bits for t in terms if not t.degenerate)
    return total, tuple(terms)


def mutual_information(
    povm: Povm,
    grid: SphereGrid,
    kind: str = ANTIPARALLEL,
    refine_factor: Optional[int] = 2,
) -> InfoReport:
    """Shannon mutual information (in bits) between the encoded direction and the
    measurement outcomes.

    Computed as the outcome-probability-weighted sum of the Kullback-Leibler
    divergences of each posterior from the uniform prior.  The caller is
    responsible for passing a POVM that satisfies completeness.  With
    ``refine_factor`` set, the value is recomputed on a refined grid and the
    absolute difference is reported as the error estimate; pass ``None`` to
    skip the refinement pass.
    """
    check_ensemble_kind(kind)
    total, terms = _information_terms(povm, grid, kind)
    if refine_factor is not None:
        if refine_factor < 2:
            raise ValueError(f"refine_factor must be at least 2, got {refine_factor}")
        fine = build_grid(grid.order_theta * refine_factor, grid.order_phi * refine_factor)
        fine_total, _ = _information_terms(povm, fine, kind)
        error_estimate = abs(fine_total - total)
    else:
        error_estimate = float("nan")
    return InfoReport(
        mutual_information_bits=total,
        per_outcome=terms,
        grid_orders=grid.orders,
        error_estimate=error_estimate,
    )


def _reduced_ratio_columns(
    thetas: np.ndarray, grid: SphereGrid, kind: str, weight: float = 1.0
) -> Iterator[tuple[slice, np.ndarray, np.ndarray]]:
    """Yield (column slice, posterior ratios, per-column prior) in chunks.

    The ratio of the reduced conditional probability to its sphere average is
    what every one-angle information functional integrates; the weight enters
    both numerator and denominator and cancels there.
    """
    cos_half_sq = 0.5 * (1.0 + grid.cos_theta)
    cos_phi_sin = np.cos(grid.phi) * grid.sin_theta
    sign = -1.0 if kind == ANTIPARALLEL else 1.0
    chunk = max(1, int(4_000_000 // max(len(grid), 1)))
    for start in range(0, thetas.size, chunk):
        block = slice(start, min(start + chunk, thetas.size))
        ct = np.cos(thetas[block])
        st = np.sin(thetas[block])
        alignment = np.outer(grid.cos_theta, ct) + np.outer(cos_phi_sin, st)
        conditional = (0.5 * weight) * cos_half_sq[:, None] * (1.0 + sign * alignment)
        mean = (weight / 12.0) * (3.0 + sign * ct)
        yield block, conditional / mean[None, :], mean


def info_theta(
    theta: float, grid: SphereGrid, kind: str = ANTIPARALLEL, weight: float = 1.0
) -> float:
    """Information (in bits) carried by one reduced outcome per unit weight.

    This is the weight-normalized Kullback-Leibler contribution of a reduced
    element with opening angle ``theta``; the weight cancels exactly in the
    posterior ratio, which the ``weight`` argument lets callers verify.
    """
    check_ensemble_kind(kind)
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"opening angle must lie in [0, pi], got {theta!r}")
    _, ratio, mean = next(
        _reduced_ratio_columns(np.array([theta], dtype=float), grid, kind, weight)
    )
    integral = weighted_node_sum(grid.weights, _xlog2x(ratio[:, 0]))
    return (float(mean[0]) / weight) * integral


def info_theta_batch(
    thetas: Sequence[float], grid: SphereGrid, kind: str = ANTIPARALLEL
) -> np.ndarray:
    """info_theta evaluated at many angles, sharing the node geometry.

    Uses the same compensated per-angle reduction as :func:`info_theta`, so
    single and batched evaluations agree bitwise.
    """
    check_ensemble_kind(kind)
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 1:
        raise ValueError("thetas must be one-dimensional")
    if thetas.size and (thetas.min() < 0.0 or thetas.max() > math.pi):
        raise ValueError("all opening angles must lie in [0, pi]")
    out = np.empty(thetas.size, dtype=float)
    for block, ratio, mean in _reduced_ratio_columns(thetas, grid, kind):
        values = _xlog2x(ratio)
        for j in range(values.shape[1]):
            out[block.start + j] = mean[j] * weighted_node_sum(grid.weights, values[:, j])
    return out


def _info_theta_fast(thetas: np.ndarray, grid: SphereGrid, kind: str) -> np.ndarray:
    """Vectorized-reduction variant used inside iterative searches.

    Trades the compensated summation of :func:`info_theta` for a plain dot
    product; the difference is far below any tolerance the searches use.
    """
    thetas = np.asarray(thetas, dtype=float)
    out = np.empty(thetas.size, dtype=float)
    for block, ratio, mean in _reduced_ratio_columns(thetas, grid, kind):
        out[block] = mean * (grid.weights @ _xlog2x(ratio))
    return out


def _bound_inner(cos_t: np.ndarray) -> np.ndarray:
    """Sphere average of the squared posterior ratio of a reduced outcome,
    as a function of cos(opening angle).

    Closed form (6/5) * (c^2 - 10c + 13) / (3 - c)^2; equals the quadrature of
    the squared ratio exactly (the integrand is polynomial in cos(theta) and
    a trigonometric polynomial in phi).
    """
    return 1.2 * (cos_t * cos_t - 10.0 * cos_t + 13.0) / (3.0 - cos_t) ** 2


def _bound_array(thetas: np.ndarray) -> np.ndarray:
    cos_t = np.cos(thetas)
    return (3.0 - cos_t) / 12.0 * np.log2(_bound_inner(cos_t))


def bound_theta(theta: float) -> float:
    """Jensen upper bound on :func:`info_theta` (antiparallel ensemble), in bits.

    Obtained by moving the logarithm of the posterior ratio outside the sphere
    average by concavity; the remaining second-moment integral has a closed
    form, so no quadrature is involved.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"opening angle must lie in [0, pi], got {theta!r}")
    return float(_bound_array(np.asarray(theta, dtype=float)))


def _h_array(thetas: np.ndarray) -> np.ndarray:
    """d(bound_theta)/dtheta divided by sin(theta), in a form free of that sine.

    Division by sin(theta) cancels analytically, which keeps the evaluation
    stable arbitrarily close to the interval ends.
    """
    c = np.cos(thetas)
    d = c * c - 10.0 * c + 13.0
    log_term = np.log2(_bound_inner(c)) / 12.0
    rational = ((3.0 - c) * (2.0 * c - 10.0) / d + 2.0) / (12.0 * LN2)
    return log_term - rational


def h_function(theta: float) -> float:
    """Slope of the Jensen bound divided by sin(theta).

    Strictly decreasing on (0, pi); its constancy across outcomes is the
    stationarity condition of the constrained bound maximization.  The open
    interval is required because the defining ratio divides by sin(theta).
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"h is defined on the open interval (0, pi), got {theta!r}")
    return float(_h_array(np.asarray(theta, dtype=float)))


def h_derivative(theta: float) -> float:
    """Closed-form derivative of :func:`h_function`, valid on the closed interval.

    Negative on (0, pi) and zero at both ends; the endpoint values are pinned
    to the analytic limit 0 because sin(pi) in floating point is not exact.
    """
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"opening angle must lie in [0, pi], got {theta!r}")
    if theta == 0.0 or theta == math.pi:
        return 0.0
    c = math.cos(theta)
    cos_2t = math.cos(2.0 * theta)
    numerator = 15.0 - 8.0 * c + cos_2t
    denominator = (27.0 - 20.0 * c + cos_2t) ** 2
    return (-16.0 / (3.0 * LN2)) * numerator / denominator * math.sin(theta) / (3.0 - c)


def reduced_info(
    measurement: ReducedMeasurement, grid: SphereGrid, kind: str = ANTIPARALLEL
) -> float:
    """Mutual information (bits) of a reduced measurement: sum of weight * info_theta.

    For the parallel ensemble each opening angle contributes as its supplement
    does in the antiparallel ensemble, but the value is integrated from the
    parallel-ensemble probabilities directly rather than via that identity.
    """
    check_ensemble_kind(kind)
    values = info_theta_batch(np.asarray(measurement.thetas), grid, kind)
    return math.fsum(w * v for w, v in zip(measurement.weights, values))


def reduced_bound(measurement: ReducedMeasurement, kind: str = ANTIPARALLEL) -> float:
    """Closed-form Jensen upper bound on :func:`reduced_info`, in bits."""
    check_ensemble_kind(kind)
    thetas = np.asarray(measurement.thetas)
    if kind == PARALLEL:
        thetas = math.pi - thetas
    values = _bound_array(thetas)
    return math.fsum(w * v for w, v in zip(measurement.weights, values))

"""POVM data model: rank-one elements, completeness and feasibility checks, and the
rotational reduction of product measurements to (weight, angle) parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    Rotation3,
    SphericalDirection,
    Spinor,
    TwoQubitState,
    direction_from_spinor,
    spinor_from_direction,
)

__all__ = [
    "PovmElement",
    "Povm",
    "ProductElement",
    "ReducedMeasurement",
    "CompletenessReport",
    "FeasibilityReport",
    "validate_completeness",
    "entanglement_measure",
    "product_directions",
    "reduce_product_measurement",
    "feasibility_check",
    "apply_collective_rotation",
    "povm_from_product_elements",
    "reduced_element",
]

DEFAULT_COMPLETENESS_TOL = 1e-9
DEFAULT_FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class PovmElement:
    """Rank-one POVM element: positive weight times the projector on ``state``."""

    weight: float
    state: TwoQubitState

    def __post_init__(self):
        if not (self.weight > 0.0) or not math.isfinite(self.weight):
            raise ValueError(f"element weight must be positive and finite, got {self.weight!r}")
        object.__setattr__(self, "weight", float(self.weight))

    def matrix(self) -> np.ndarray:
        """4x4 operator weight * |state><state|."""
        amps = self.state.as_array()
        return self.weight * np.outer(amps, np.conj(amps))


@dataclass(frozen=True, eq=False)
class Povm:
    """Ordered collection of rank-one elements.

    Construction only enforces the cheap local invariants (positive weights,
    normalized states).  Whether the elements actually sum to the identity is
    a property of the collection checked by :func:`validate_completeness`, so
    that invalid user input can still be represented and diagnosed.
    """

    elements: tuple[PovmElement, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        if len(elements) < 1:
            raise ValueError("a POVM needs at least one element")
        object.__setattr__(self, "elements", elements)

    def __len__(self) -> int:
        return len(self.elements)

    def weight_sum(self) -> float:
        return math.fsum(e.weight for e in self.elements)

    def matrix_sum(self) -> np.ndarray:
        total = np.zeros((4, 4), dtype=complex)
        for e in self.elements:
            total += e.matrix()
        return total


@dataclass(frozen=True)
class ProductElement:
    """POVM element whose state is a tensor product of two single-spin states,
    described by the two polarization directions."""

    weight: float
    first: SphericalDirection
    second: SphericalDirection

    def __post_init__(self):
        if not (self.weight > 0.0) or not math.isfinite(self.weight):
            raise ValueError(f"element weight must be positive and finite, got {self.weight!r}")
        object.__setattr__(self, "weight", float(self.weight))

    def to_povm_element(self) -> PovmElement:
        state = TwoQubitState.from_spinors(
            spinor_from_direction(self.first), spinor_from_direction(self.second)
        )
        return PovmElement(self.weight, state)


@dataclass(frozen=True)
class ReducedMeasurement:
    """Weights and opening angles (c_r, theta_r) left after rotating every product
    element so its first direction is the north pole and its second lies on the
    phi = 0 meridian.

    Only the per-pair ranges are enforced here; the global sum constraints
    (weights summing to 4, weighted cosines summing to 0) define the feasible
    region and are checked by :func:`feasibility_check`.
    """

    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        cleaned = []
        for weight, theta in self.pairs:
            weight = float(weight)
            theta = float(theta)
            if not (weight > 0.0) or not math.isfinite(weight):
                raise ValueError(f"reduced weight must be positive, got {weight!r}")
            if not (0.0 <= theta <= math.pi):
                raise ValueError(f"reduced angle must lie in [0, pi], got {theta!r}")
            cleaned.append((weight, theta))
        object.__setattr__(self, "pairs", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.pairs)

    @property
    def thetas(self) -> tuple[float, ...]:
        return tuple(t for _, t in self.pairs)


@dataclass(frozen=True)
class CompletenessReport:
    max_entry_error: float
    ok: bool
    tol: float


@dataclass(frozen=True)
class FeasibilityReport:
    sum_c: float
    sum_c_cos: float
    ok: bool
    tol: float


def validate_completeness(povm: Povm, tol: float = DEFAULT_COMPLETENESS_TOL) -> CompletenessReport:
    """Check that the weighted projectors sum to the identity on the 4-dim space.

    Returns the maximum entrywise deviation from the identity matrix and
    whether it stays within ``tol``.
    """
    deviation = povm.matrix_sum() - np.eye(4)
    max_err = float(np.max(np.abs(deviation)))
    return CompletenessReport(max_entry_error=max_err, ok=max_err <= tol, tol=tol)


def entanglement_measure(state: TwoQubitState) -> float:
    """Smaller squared Schmidt coefficient of a two-spin pure state.

    Ranges over [0, 1/2]; zero (within tolerance) exactly for product states,
    1/2 for maximally entangled ones.
    """
    matrix = state.as_array().reshape(2, 2)
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    return float(np.min(singular_values) ** 2)


def product_directions(
    state: TwoQubitState, tol: float = 1e-9
) -> tuple[SphericalDirection, SphericalDirection]:
    """Recover the two single-spin polarization directions of a product state.

    Raises ValueError when the state is entangled beyond ``tol`` (measured by
    the smaller squared Schmidt coefficient).
    """
    matrix = state.as_array().reshape(2, 2)
    u, s, vh = np.linalg.svd(matrix)
    if float(s[-1] ** 2) > tol:
        raise ValueError(
            f"state is not a product state: smaller squared Schmidt coefficient {s[-1] ** 2:.3e}"
        )
    first = _spinor_from_components(u[0, 0], u[1, 0])
    second = _spinor_from_components(vh[0, 0], vh[0, 1])
    return direction_from_spinor(first), direction_from_spinor(second)


def _spinor_from_components(up: complex, down: complex) -> Spinor:
    norm = math.sqrt(abs(up) ** 2 + abs(down) ** 2)
    return Spinor(up / norm, down / norm)


def reduce_product_measurement(elements: Sequence[ProductElement]) -> ReducedMeasurement:
    """Collapse product elements to (weight, opening angle) pairs.

    The opening angle is the angle between the two polarization directions;
    a per-element collective rotation maps the element onto the canonical
    north-pole/meridian form without changing any outcome statistics, so the
    pair is all that survives.  Feasibility of the collection is not enforced
    here; see :func:`feasibility_check`.
    """
    pairs = []
    for element in elements:
        cos_angle = element.first.unit_vector().dot(element.second.unit_vector())
        cos_angle = min(max(cos_angle, -1.0), 1.0)
        pairs.append((element.weight, math.acos(cos_angle)))
    return ReducedMeasurement(tuple(pairs))


def feasibility_check(
    measurement: ReducedMeasurement, tol: float = DEFAULT_FEASIBILITY_TOL
) -> FeasibilityReport:
    """Check the reduced-parameter constraints of a valid product POVM:
    weights sum to 4 and weighted cosines of the opening angles sum to 0."""
    sum_c = math.fsum(measurement.weights)
    sum_c_cos = math.fsum(w * math.cos(t) for w, t in measurement.pairs)
    ok = abs(sum_c - 4.0) <= tol and abs(sum_c_cos) <= tol
    return FeasibilityReport(sum_c=sum_c, sum_c_cos=sum_c_cos, ok=ok, tol=tol)


def apply_collective_rotation(element: ProductElement, rotation: Rotation3) -> ProductElement:
    """Rotate both directions of a product element by the same rotation."""
    first = rotation.apply(element.first.unit_vector()).to_direction()
    second = rotation.apply(element.second.unit_vector()).to_direction()
    return ProductElement(element.weight, first, second)


def povm_from_product_elements(elements: Sequence[ProductElement]) -> Povm:
    return Povm(tuple(e.to_povm_element() for e in elements))


def reduced_element(weight: float, theta_r: float) -> PovmElement:
    """Canonical POVM element of a reduced pair: first spin along the north pole,
    second along (theta_r, phi=0)."""
    north = SphericalDirection(0.0, 0.0)
    tilted = SphericalDirection(theta_r, 0.0)
    state = TwoQubitState.from_spinors(
        spinor_from_direction(north), spinor_from_direction(tilted)
    )
    return PovmElement(weight, state)

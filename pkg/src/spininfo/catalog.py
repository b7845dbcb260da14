"""Constructors for the named reference measurements exposed by the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import (
    ANTIPARALLEL,
    PARALLEL,
    SphericalDirection,
    Spinor,
    TwoQubitState,
    antipode,
    direction_from_spinor,
    spinor_from_direction,
)
from .povm import Povm, PovmElement, ProductElement, validate_completeness

__all__ = [
    "NamedMeasurement",
    "TETRAHEDRON_VERTICES",
    "CATALOG_NAMES",
    "locc_orthogonal",
    "bagan_antiparallel",
    "tarrach_vidal_parallel",
    "reference_state_b",
    "build_named",
]

_SQRT3 = math.sqrt(3.0)

# Even-parity tetrahedron inscribed in the unit sphere; pairwise dot products -1/3.
TETRAHEDRON_VERTICES: tuple[SphericalDirection, ...] = tuple(
    SphericalDirection(math.acos(z / _SQRT3), math.atan2(y, x))
    for x, y, z in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
)

_CONSTRUCTION_TOL = 1e-10


@dataclass(frozen=True)
class NamedMeasurement:
    """A catalog POVM with the ensemble it is meant for and its reference value."""

    name: str
    povm: Povm
    ensemble_hint: str
    expected_bits: Optional[float] = None
    product_form: Optional[tuple[ProductElement, ...]] = None


def _singlet() -> np.ndarray:
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)


def _symmetric_pair(direction: SphericalDirection) -> np.ndarray:
    """Symmetrized antiparallel pair state for ``direction``, with a fixed
    per-direction phase.

    The phase -e^{-i phi} makes the four pair states of any zero-sum set of
    directions add up to the zero vector, which is exactly what removes the
    cross terms between the symmetric and singlet parts in the completeness
    sum.
    """
    up = spinor_from_direction(direction).as_array()
    down = spinor_from_direction(antipode(direction)).as_array()
    pair = (np.kron(up, down) + np.kron(down, up)) / math.sqrt(2.0)
    phase = -complex(math.cos(direction.phi), -math.sin(direction.phi))
    return phase * pair


def _assert_complete(povm: Povm, name: str) -> Povm:
    report = validate_completeness(povm, tol=_CONSTRUCTION_TOL)
    if not report.ok:
        raise RuntimeError(
            f"{name} construction failed completeness "
            f"(max entry error {report.max_entry_error:.3e}); phase convention bug"
        )
    return povm


def locc_orthogonal() -> NamedMeasurement:
    """Minimal orthogonal product measurement: first spin measured along z, second
    along a perpendicular axis.

    Four unit-weight elements |m_r> (x) (|m_r> + |-m_r>)/sqrt(2) built from the
    direction angle pairs (0,0), (0,pi), (pi,0), (pi,pi).  The elements are
    mutually orthogonal product states, so this is a von Neumann measurement
    realizable by local operations and classical communication.
    """
    angle_pairs = ((0.0, 0.0), (0.0, math.pi), (math.pi, 0.0), (math.pi, math.pi))
    elements = []
    product_form = []
    for theta_m, phi_m in angle_pairs:
        direction = SphericalDirection(theta_m, phi_m)
        up = spinor_from_direction(direction)
        down = spinor_from_direction(antipode(direction))
        second = Spinor(
            (up.up + down.up) / math.sqrt(2.0), (up.down + down.down) / math.sqrt(2.0)
        )
        elements.append(PovmElement(1.0, TwoQubitState.from_spinors(up, second)))
        product_form.append(ProductElement(1.0, direction, direction_from_spinor(second)))
    povm = _assert_complete(Povm(tuple(elements)), "locc-orthogonal")
    return NamedMeasurement(
        name="locc-orthogonal",
        povm=povm,
        ensemble_hint=ANTIPARALLEL,
        expected_bits=0.557,
        product_form=tuple(product_form),
    )


def bagan_antiparallel(
    vertices: Optional[Sequence[SphericalDirection]] = None,
) -> NamedMeasurement:
    """Entangled tetrahedral measurement for the antiparallel ensemble.

    Four unit-weight orthonormal states combining the symmetrized antiparallel
    pair along each tetrahedron vertex (amplitude sqrt(3)/2) with the singlet
    (amplitude 1/2).  The per-vertex phases fixed in :func:`_symmetric_pair`
    align each element with the signal sent along its own vertex; that choice
    is what makes this the measurement extracting 0.8664 bits.
    """
    if vertices is None:
        vertices = TETRAHEDRON_VERTICES
    singlet = _singlet()
    elements = []
    for vertex in vertices:
        amplitudes = 0.5 * _SQRT3 * _symmetric_pair(vertex) + 0.5 * singlet
        elements.append(PovmElement(1.0, TwoQubitState(amplitudes)))
    povm = _assert_complete(Povm(tuple(elements)), "bagan-antiparallel")
    return NamedMeasurement(
        name="bagan-antiparallel",
        povm=povm,
        ensemble_hint=ANTIPARALLEL,
        expected_bits=0.8664,
    )


def tarrach_vidal_parallel(
    vertices: Optional[Sequence[SphericalDirection]] = None,
) -> NamedMeasurement:
    """Entangled tetrahedral measurement for the parallel ensemble.

    Four unit-weight orthonormal states combining the doubled spin state along
    each tetrahedron vertex (amplitude sqrt(3)/2) with the singlet (amplitude
    1/2).  The relative phases of the doubled states are fixed by requiring
    the four of them to sum to the zero vector, the condition that makes the
    collection complete; parallel-ensemble signals never overlap the singlet,
    so the extracted information does not depend on this phase choice.
    """
    if vertices is None:
        vertices = TETRAHEDRON_VERTICES
    doubled = []
    for vertex in vertices:
        up = spinor_from_direction(vertex).as_array()
        doubled.append(np.kron(up, up))
    phases = _zero_sum_phases(np.column_stack(doubled))
    singlet = _singlet()
    elements = []
    for phase, pair in zip(phases, doubled):
        amplitudes = 0.5 * _SQRT3 * phase * pair + 0.5 * singlet
        elements.append(PovmElement(1.0, TwoQubitState(amplitudes)))
    povm = _assert_complete(Povm(tuple(elements)), "tarrach-vidal-parallel")
    return NamedMeasurement(
        name="tarrach-vidal-parallel",
        povm=povm,
        ensemble_hint=PARALLEL,
        expected_bits=math.log2(3.0) - (2.0 / 3.0) * math.log2(math.e),
    )


def _zero_sum_phases(columns: np.ndarray) -> np.ndarray:
    """Unit phases z_r making the phased columns sum to the zero vector.

    The four columns live in a three-dimensional subspace, so a null vector
    exists; for a symmetric vertex set its entries share one modulus, which is
    verified before rescaling them to unit magnitude.
    """
    _, _, vh = np.linalg.svd(columns)
    null_vector = np.conj(vh[-1])
    residual = float(np.linalg.norm(columns @ null_vector))
    moduli = np.abs(null_vector)
    if residual > 1e-10 or moduli.max() - moduli.min() > 1e-10:
        raise RuntimeError(
            "vertex set admits no equal-modulus zero-sum phasing "
            f"(residual {residual:.3e}, modulus spread {moduli.max() - moduli.min():.3e})"
        )
    phases = null_vector / moduli
    # fix the global phase so the first element's pair amplitude is real positive
    return phases / phases[0]


def reference_state_b() -> TwoQubitState:
    """Common image of every optimal product element after its collective rotation:
    north-pole spin paired with an equatorial spin, |z> (x) (|z> + |-z>)/sqrt(2)."""
    north = Spinor(1.0, 0.0)
    equal = Spinor(1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
    return TwoQubitState.from_spinors(north, equal)


CATALOG_NAMES = ("locc-orthogonal", "bagan-antiparallel", "tarrach-vidal-parallel")


def build_named(name: str) -> NamedMeasurement:
    """Construct a catalog measurement by its CLI name."""
    if name == "locc-orthogonal":
        return locc_orthogonal()
    if name == "bagan-antiparallel":
        return bagan_antiparallel()
    if name == "tarrach-vidal-parallel":
        return tarrach_vidal_parallel()
    raise KeyError(f"unknown catalog measurement {name!r}; known: {', '.join(CATALOG_NAMES)}")

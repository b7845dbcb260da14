"""Bloch-sphere geometry: directions, spin-1/2 states, rotations, two-spin product states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ANTIPARALLEL",
    "PARALLEL",
    "ENSEMBLE_KINDS",
    "SphericalDirection",
    "UnitVector3",
    "Rotation3",
    "Spinor",
    "TwoQubitState",
    "check_ensemble_kind",
    "spinor_from_direction",
    "direction_from_spinor",
    "antipode",
    "transition_probability",
    "signal_state",
    "rotate_direction",
]

TWO_PI = 2.0 * math.pi

ANTIPARALLEL = "antiparallel"
PARALLEL = "parallel"
ENSEMBLE_KINDS = (ANTIPARALLEL, PARALLEL)

_NORM_TOL = 1e-12
_ANGLE_SLACK = 1e-9  # forgive arccos-style roundoff just past the interval ends


def check_ensemble_kind(kind: str) -> str:
    if kind not in ENSEMBLE_KINDS:
        raise ValueError(f"ensemble kind must be one of {ENSEMBLE_KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class SphericalDirection:
    """Point on the unit sphere: polar angle ``theta`` in [0, pi], azimuth ``phi`` in [0, 2*pi).

    ``phi`` is normalized into [0, 2*pi) on construction; ``theta`` outside
    [0, pi] (beyond floating-point slack) is rejected.
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not math.isfinite(theta) or not math.isfinite(phi):
            raise ValueError(f"angles must be finite, got theta={self.theta!r}, phi={self.phi!r}")
        if theta < -_ANGLE_SLACK or theta > math.pi + _ANGLE_SLACK:
            raise ValueError(f"polar angle must lie in [0, pi], got {theta!r}")
        theta = min(max(theta, 0.0), math.pi)
        phi = math.fmod(phi, TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        if phi >= TWO_PI:  # fmod of a tiny negative can round back up to 2*pi
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def unit_vector(self) -> "UnitVector3":
        s = math.sin(self.theta)
        return UnitVector3(
            s * math.cos(self.phi), s * math.sin(self.phi), math.cos(self.theta)
        )


@dataclass(frozen=True)
class UnitVector3:
    """Unit vector in R^3; the norm must already be 1 within 1e-12."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm_sq - 1.0) > _NORM_TOL:
            raise ValueError(f"vector has squared norm {norm_sq!r}, expected 1 within {_NORM_TOL}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0 or not math.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(x / norm, y / norm, z / norm)

    @classmethod
    def from_array(cls, arr) -> "UnitVector3":
        x, y, z = (float(v) for v in arr)
        return cls.normalized(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: "UnitVector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def negated(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)

    def to_direction(self) -> SphericalDirection:
        theta = math.acos(min(max(self.z, -1.0), 1.0))
        phi = math.atan2(self.y, self.x)
        return SphericalDirection(theta, phi)


@dataclass(frozen=True, eq=False)
class Rotation3:
    """Proper rotation of R^3, stored as a 3x3 orthogonal matrix with det +1."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got shape {m.shape}")
        ortho_err = np.max(np.abs(m.T @ m - np.eye(3)))
        det = np.linalg.det(m)
        if ortho_err > _NORM_TOL or abs(det - 1.0) > _NORM_TOL:
            raise ValueError(
                f"not a proper rotation: orthogonality error {ortho_err:.3e}, det {det!r}"
            )
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "Rotation3":
        return cls(np.eye(3))

    @classmethod
    def from_axis_angle(cls, axis: UnitVector3, angle: float) -> "Rotation3":
        """Rodrigues rotation about ``axis`` by ``angle`` radians (right-hand rule)."""
        k = axis.as_array()
        kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
        return cls(np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx))

    @classmethod
    def between(cls, source: UnitVector3, target: UnitVector3) -> "Rotation3":
        """Rotation taking ``source`` onto ``target`` along the shorter arc."""
        a = source.as_array()
        b = target.as_array()
        v = np.cross(a, b)
        s = float(np.linalg.norm(v))
        c = float(a @ b)
        if s < 1e-14:
            if c > 0.0:
                return cls.identity()
            # antipodal pair: rotate by pi about any axis perpendicular to source
            seed = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            perp = seed - (seed @ a) * a
            perp /= np.linalg.norm(perp)
            return cls.from_axis_angle(UnitVector3.from_array(perp), math.pi)
        vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
        # (1 - c)/s^2 rewritten as 1/(1 + c): no cancellation for nearly aligned pairs
        return cls(np.eye(3) + vx + vx @ vx * (1.0 / (1.0 + c)))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Rotation3":
        """Haar-uniform random rotation (QR of a Gaussian matrix with sign fix)."""
        q, r = np.linalg.qr(rng.normal(size=(3, 3)))
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return cls(q)

    def apply(self, v: UnitVector3) -> UnitVector3:
        out = self.matrix @ v.as_array()
        return UnitVector3.from_array(out)

    def compose(self, other: "Rotation3") -> "Rotation3":
        """Rotation equal to applying ``other`` first and then ``self``."""
        return Rotation3(self.matrix @ other.matrix)

    def __matmul__(self, other: "Rotation3") -> "Rotation3":
        return self.compose(other)


@dataclass(frozen=True)
class Spinor:
    """Normalized two-component spin-1/2 amplitude vector (up, down)."""

    up: complex
    down: complex

    def __post_init__(self):
        norm = abs(self.up) ** 2 + abs(self.down) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"spinor has squared norm {norm!r}, expected 1 within {_NORM_TOL}")
        object.__setattr__(self, "up", complex(self.up))
        object.__setattr__(self, "down", complex(self.down))

    def as_array(self) -> np.ndarray:
        return np.array([self.up, self.down], dtype=complex)

    def scaled_by_phase(self, phase: complex) -> "Spinor":
        return Spinor(phase * self.up, phase * self.down)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Normalized two-spin state in the fixed product basis.

    Basis order (index 0..3): ``|z z>``, ``|z -z>``, ``|-z z>``, ``|-z -z>``,
    where the first factor is the first spin.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise ValueError(f"expected 4 amplitudes, got shape {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state has squared norm {norm!r}, expected 1 within {_NORM_TOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_spinors(cls, first: Spinor, second: Spinor) -> "TwoQubitState":
        return cls(np.kron(first.as_array(), second.as_array()))

    def as_array(self) -> np.ndarray:
        return self.amplitudes

    def overlap(self, other: "TwoQubitState") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def spinor_from_direction(d: SphericalDirection) -> Spinor:
    """Spin-1/2 state polarized along ``d``.

    Returns (cos(theta/2), e^{i phi} sin(theta/2)), the +1 eigenvector of the
    Pauli vector projected on the direction.
    """
    half = 0.5 * d.theta
    return Spinor(math.cos(half), complex(math.cos(d.phi), math.sin(d.phi)) * math.sin(half))


def direction_from_spinor(s: Spinor) -> SphericalDirection:
    """Polarization direction of a spin state (inverse of spinor_from_direction up to phase)."""
    theta = 2.0 * math.atan2(abs(s.down), abs(s.up))
    if abs(s.down) < 1e-15 or abs(s.up) < 1e-15:
        phi = 0.0
    else:
        phi = math.atan2(s.down.imag, s.down.real) - math.atan2(s.up.imag, s.up.real)
    return SphericalDirection(theta, phi)


def antipode(d: SphericalDirection) -> SphericalDirection:
    """Direction diametrically opposite to ``d``: (pi - theta, phi + pi mod 2*pi)."""
    return SphericalDirection(math.pi - d.theta, d.phi + math.pi)


def transition_probability(a: Spinor, b: Spinor) -> float:
    """Born probability |<a|b>|^2; equals (1 + n_a . n_b)/2 for spin-1/2 states."""
    amp = np.conj(a.up) * b.up + np.conj(a.down) * b.down
    return float(abs(amp) ** 2)


def signal_state(d: SphericalDirection, kind: str = ANTIPARALLEL) -> TwoQubitState:
    """Two-spin product state encoding the direction ``d``.

    ``antiparallel`` pairs the spin along ``d`` with one along the opposite
    direction; ``parallel`` repeats the same spin twice.
    """
    check_ensemble_kind(kind)
    first = spinor_from_direction(d)
    second = spinor_from_direction(antipode(d)) if kind == ANTIPARALLEL else first
    return TwoQubitState.from_spinors(first, second)


def rotate_direction(rotation: Rotation3, d: SphericalDirection) -> SphericalDirection:
    """Spherical coordinates of the rotated unit vector of ``d``."""
    return rotation.apply(d.unit_vector()).to_direction()

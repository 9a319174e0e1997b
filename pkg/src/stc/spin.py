"""Four-spin model of two coupled singlet-triplet qubits.

Tensor order is dot1 x dot2 x dot3 x dot4 with ``|up> = (1, 0)`` on every dot,
so basis index ``8 s1 + 4 s2 + 2 s3 + s4`` with ``s = 0`` for spin up.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.spatial.transform import Rotation as _ScipyRotation

from .errors import NonUnitAxis, ZeroZeemanField
from .linalg import kron_all

AXIS_TOL = 1e-12

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

N_SPINS = 4
DIM = 2**N_SPINS
EZ = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class Rotation3:
    """Spin rotation by ``angle`` about the unit vector ``axis``."""

    axis: tuple[float, float, float]
    angle: float

    def __post_init__(self):
        axis = tuple(float(x) for x in np.asarray(self.axis, dtype=float).ravel())
        if len(axis) != 3 or not all(np.isfinite(axis)):
            raise NonUnitAxis(f"axis must be a finite 3-vector, got {self.axis!r}")
        if abs(np.linalg.norm(axis) - 1.0) > AXIS_TOL:
            raise NonUnitAxis(f"axis {axis} is not a unit vector")
        if not np.isfinite(self.angle):
            raise ValueError("rotation angle must be finite")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "angle", float(self.angle))

    @classmethod
    def about(cls, axis, angle: float) -> "Rotation3":
        """Build from any non-zero axis vector (normalized here)."""
        axis = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(axis)
        if norm == 0.0:
            raise NonUnitAxis("rotation axis must be non-zero")
        return cls(tuple(axis / norm), angle)

    @classmethod
    def identity(cls) -> "Rotation3":
        return cls((0.0, 0.0, 1.0), 0.0)

    @classmethod
    def from_polar(cls, theta: float, angle: float, azimuth: float = 0.0) -> "Rotation3":
        """Axis at polar angle ``theta`` from z (azimuth measured from x)."""
        st = np.sin(theta)
        return cls.about((st * np.cos(azimuth), st * np.sin(azimuth), np.cos(theta)), angle)

    @classmethod
    def from_matrix(cls, r: np.ndarray) -> "Rotation3":
        rotvec = _ScipyRotation.from_matrix(np.asarray(r, dtype=float)).as_rotvec()
        angle = float(np.linalg.norm(rotvec))
        if angle < 1e-15:
            return cls.identity()
        return cls.about(rotvec, angle)

    @property
    def n(self) -> np.ndarray:
        return np.array(self.axis)

    @property
    def theta(self) -> float:
        """Polar angle between the axis and the quantization axis z."""
        return float(np.arccos(np.clip(self.axis[2], -1.0, 1.0)))

    @property
    def canonical_angle(self) -> float:
        return float(np.mod(self.angle, 2 * np.pi))


def spin_flip_unitary(r: Rotation3) -> np.ndarray:
    """SU(2) matrix ``exp(i angle n.sigma / 2)``."""
    n = r.n
    ns = n[0] * SX + n[1] * SY + n[2] * SZ
    return np.cos(r.angle / 2) * ID2 + 1j * np.sin(r.angle / 2) * ns


def rotation_matrix(r: Rotation3) -> np.ndarray:
    """Right-handed SO(3) rotation matching ``U^dag sigma U = R^-1 sigma``."""
    n = r.n
    c, s = np.cos(r.angle), np.sin(r.angle)
    cross = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return c * np.eye(3) + s * cross + (1 - c) * np.outer(n, n)


@lru_cache(maxsize=None)
def _site_ops() -> np.ndarray:
    """``ops[site, a]`` is Pauli ``a`` acting on ``site`` in the 16-dim space."""
    ops = np.empty((N_SPINS, 3, DIM, DIM), dtype=complex)
    for site in range(N_SPINS):
        for a, pauli in enumerate(PAULI):
            factors = [ID2] * N_SPINS
            factors[site] = pauli
            ops[site, a] = kron_all(*factors)
    ops.setflags(write=False)
    return ops


def site_pauli(site: int, a: int) -> np.ndarray:
    return _site_ops()[site, a]


def total_sz() -> np.ndarray:
    return sum(site_pauli(s, 2) for s in range(N_SPINS))


def parity_z() -> np.ndarray:
    return kron_all(SZ, SZ, SZ, SZ)


def anisotropic_exchange(site_a: int, site_b: int, r: np.ndarray) -> np.ndarray:
    """Operator ``sigma^a . R sigma^b``."""
    ops = _site_ops()
    return np.einsum("aij,ab,bjk->ik", ops[site_a], r, ops[site_b])


def basis_state(spins: str) -> int:
    """Index of a product state written as e.g. ``'udud'``."""
    idx = 0
    for ch in spins:
        idx = 2 * idx + {"u": 0, "d": 1}[ch]
    return idx


@dataclass(frozen=True, eq=False)
class SpinParams:
    """Parameters of the four-spin Hamiltonian (energies in ueV)."""

    h: np.ndarray  # shape (4, 3)
    j1: float = 0.0
    j2: float = 0.0
    jsc: float = 0.0
    rot1: Rotation3 = field(default_factory=Rotation3.identity)
    rotsc: Rotation3 = field(default_factory=Rotation3.identity)
    rot2: Rotation3 = field(default_factory=Rotation3.identity)

    def __post_init__(self):
        h = np.array(self.h, dtype=float)
        if h.shape == (4,):
            h = np.outer(h, EZ)
        if h.shape != (4, 3):
            raise ValueError(f"h must hold four Zeeman vectors, got shape {h.shape}")
        if not np.all(np.isfinite(h)) or not all(
            np.isfinite(x) for x in (self.j1, self.j2, self.jsc)
        ):
            raise ValueError("spin parameters must be finite")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @classmethod
    def uniform(cls, h, jsc: float, phi_so: float, theta: float,
                j1: float = 0.0, j2: float = 0.0) -> "SpinParams":
        """Same spin-orbit axis and angle on every bond; the superconducting
        bond combines two tunneling rotations (angle ``2 phi_so``)."""
        rot = Rotation3.from_polar(theta, phi_so)
        return cls(h=h, j1=j1, j2=j2, jsc=jsc, rot1=rot,
                   rotsc=Rotation3(rot.axis, 2 * phi_so), rot2=rot)

    @property
    def aligned(self) -> bool:
        return bool(np.all(np.abs(self.h[:, :2]) <= 1e-12 * np.maximum(1.0, np.abs(self.h[:, 2:]))))

    @property
    def hz(self) -> np.ndarray:
        return self.h[:, 2].copy()

    @property
    def hbar(self) -> float:
        return float(np.mean(np.linalg.norm(self.h, axis=1)))

    @property
    def dh1(self) -> float:
        return float(self.h[0, 2] - self.h[1, 2])

    @property
    def dh(self) -> float:
        return float(self.h[1, 2] - self.h[2, 2])

    @property
    def dh2(self) -> float:
        return float(self.h[2, 2] - self.h[3, 2])

    def with_couplings(self, **kw) -> "SpinParams":
        return replace(self, **kw)


def zeeman_profile(hbar: float, dh: float, dh1: float, dh2: float) -> np.ndarray:
    """Four z-aligned splittings with mean ``hbar`` and the given differences."""
    h2 = hbar - (dh1 - 2 * dh - dh2) / 4
    return np.array([h2 + dh1, h2, h2 - dh, h2 - dh - dh2])


@dataclass(frozen=True)
class UniformDevice:
    """Device-level parametrization used for sweeps.

    ``phase`` is the Josephson phase difference; ``None`` means a single
    superconductor, in which case ``jsc`` is used as is. With a junction the
    superconductor-mediated exchange becomes ``4 jsc cos^2(phase / 2)``.
    """

    hbar: float = 20.0
    dh: float = 2.0
    dh1: float = 1.0
    dh2: float = 1.0
    jsc: float = 0.4
    j1: float = 0.0
    j2: float = 0.0
    phi_so: float = np.pi / 2
    theta: float = np.pi / 2
    phase: float | None = None

    @property
    def jsc_eff(self) -> float:
        if self.phase is None:
            return self.jsc
        # cos^2(phase/2), exactly zero at phase = pi
        return 4 * self.jsc * np.sin((np.pi - self.phase) / 2) ** 2

    def spin_params(self) -> SpinParams:
        return SpinParams.uniform(
            zeeman_profile(self.hbar, self.dh, self.dh1, self.dh2),
            jsc=self.jsc_eff, phi_so=self.phi_so, theta=self.theta,
            j1=self.j1, j2=self.j2,
        )


def build_h_spin(p: SpinParams) -> np.ndarray:
    """16x16 Hamiltonian: Zeeman terms plus three anisotropic exchange bonds."""
    ops = _site_ops()
    h = 0.5 * np.einsum("sa,saij->ij", p.h, ops)
    for (a, b), j, rot in (((1, 2), p.jsc, p.rotsc), ((0, 1), p.j1, p.rot1), ((2, 3), p.j2, p.rot2)):
        if j != 0.0:
            h = h + (j / 4) * anisotropic_exchange(a, b, rotation_matrix(rot))
    return 0.5 * (h + h.conj().T)


def zeeman_frame(hvec: np.ndarray) -> np.ndarray:
    """Rotation taking ``z`` onto the direction of ``hvec``."""
    norm = np.linalg.norm(hvec)
    if norm == 0.0:
        raise ZeroZeemanField("Zeeman field vanishes; local spin frame undefined")
    u = hvec / norm
    axis = np.cross(EZ, u)
    s = np.linalg.norm(axis)
    if s < 1e-15:
        if u[2] > 0:
            return np.eye(3)
        return rotation_matrix(Rotation3((1.0, 0.0, 0.0), np.pi))
    return rotation_matrix(Rotation3.about(axis, float(np.arctan2(s, u[2]))))


def gauge_align_zeeman(p: SpinParams) -> SpinParams:
    """Rotate each dot's spin frame so its Zeeman field points along ``+z``.

    Bond rotations pick up the local frames, ``R_ab -> Rz_a^-1 R_ab Rz_b``; the
    resulting Hamiltonian is unitarily equivalent to the input.
    """
    frames = [zeeman_frame(hv) for hv in p.h]
    is_id = [np.array_equal(f, np.eye(3)) for f in frames]

    def compose(rot: Rotation3, a: int, b: int) -> Rotation3:
        if is_id[a] and is_id[b]:
            return rot
        return Rotation3.from_matrix(frames[a].T @ rotation_matrix(rot) @ frames[b])

    mags = np.linalg.norm(p.h, axis=1)
    return replace(
        p,
        h=np.outer(mags, EZ),
        rot1=compose(p.rot1, 0, 1),
        rotsc=compose(p.rotsc, 1, 2),
        rot2=compose(p.rot2, 2, 3),
    )

"""Projected singlet-triplet models and their anisotropy functions.

Everything here is a closed form on top of :mod:`stc.spin`. The computational
basis is ``{udud, uddu, duud, dudu}`` (qubit ``i`` is ``|0> = ud``, ``|1> = du``
on its two dots) and the zero-magnetization basis appends ``{uudd, dduu}``.
Constant energy offsets are dropped, so comparisons use traceless parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnalignedZeeman, ZeroZeemanField
from .hubbard import schrieffer_wolff2
from .linalg import kron
from .spin import SX, SY, SZ, SpinParams, basis_state, build_h_spin, rotation_matrix

COMP_STATES = ("udud", "uddu", "duud", "dudu")
LEAK_STATES = ("uudd", "dduu")
COMP_INDEX = np.array([basis_state(s) for s in COMP_STATES])
SZERO_INDEX = np.array([basis_state(s) for s in COMP_STATES + LEAK_STATES])

TAU = (SX, SY, SZ)


def gamma_parallel(phi, theta):
    """Ising weight ``2 sin^2(theta) sin^2(phi/2) - 1``."""
    return 2 * np.sin(theta) ** 2 * np.sin(np.asarray(phi) / 2) ** 2 - 1


def gamma_perp(phi, theta):
    """Transverse weight ``[cos(phi/2) + i cos(theta) sin(phi/2)]^2``."""
    half = np.asarray(phi) / 2
    return (np.cos(half) + 1j * np.cos(theta) * np.sin(half)) ** 2


def j_of_phi(jsc: float, phi):
    """Junction-controlled exchange ``4 jsc cos^2(phi/2)``."""
    return 4 * jsc * half_cos(phi) ** 2


def half_cos(phi):
    """``cos(phi/2)`` written as ``sin((pi - phi)/2)`` so that it is exactly 0 at ``phi = pi``."""
    return np.sin((np.pi - np.asarray(phi)) / 2)


def bond_gammas(r: np.ndarray) -> tuple[float, complex]:
    """``(gamma_par, gamma_perp)`` of a bond from its rotation matrix.

    Agrees with :func:`gamma_parallel` / :func:`gamma_perp` at the bond's
    angle and polar axis angle, for any axis azimuth.
    """
    return float(-r[2, 2]), complex(0.5 * ((r[0, 0] + r[1, 1]) - 1j * (r[0, 1] - r[1, 0])))


@dataclass(frozen=True)
class STParams:
    b1: np.ndarray
    b2: np.ndarray
    jzz: float


@dataclass(frozen=True)
class LeakageSpectrum:
    e_leak_plus: float
    e_leak_minus: float
    coupling: complex


def _require_aligned(p: SpinParams) -> None:
    if not p.aligned:
        raise UnalignedZeeman("Zeeman fields must point along z; apply gauge_align_zeeman first")


def st_params(p: SpinParams) -> STParams:
    _require_aligned(p)
    fields = []
    for j, rot, dh in ((p.j1, p.rot1, p.dh1), (p.j2, p.rot2, p.dh2)):
        _, gperp = bond_gammas(rotation_matrix(rot))
        fields.append(np.array([j * gperp.real, j * gperp.imag, dh]))
    gpar, _ = bond_gammas(rotation_matrix(p.rotsc))
    return STParams(fields[0], fields[1], p.jsc * gpar)


def build_h_st(p: SpinParams) -> tuple[np.ndarray, STParams]:
    """Two-qubit Hamiltonian on the computational basis."""
    st = st_params(p)
    eye = np.eye(2)
    h = sum(0.5 * st.b1[a] * kron(TAU[a], eye) + 0.5 * st.b2[a] * kron(eye, TAU[a]) for a in range(3))
    h = h + 0.25 * st.jzz * kron(SZ, SZ)
    return h, st


def leakage_spectrum(p: SpinParams) -> LeakageSpectrum:
    _require_aligned(p)
    hz = p.hz
    zeeman = 0.5 * (hz[0] + hz[1] - hz[2] - hz[3])
    gpar1, _ = bond_gammas(rotation_matrix(p.rot1))
    gpar2, _ = bond_gammas(rotation_matrix(p.rot2))
    gpar, gperp = bond_gammas(rotation_matrix(p.rotsc))
    shift = -0.5 * (p.j1 * gpar1 + p.j2 * gpar2) + 0.25 * p.jsc * gpar
    return LeakageSpectrum(zeeman + shift, -zeeman + shift, 0.5 * p.jsc * gperp)


def build_h_szero(p: SpinParams) -> tuple[np.ndarray, LeakageSpectrum]:
    """Zero-magnetization Hamiltonian: computational block plus the two leakage states."""
    hst, _ = build_h_st(p)
    spec = leakage_spectrum(p)
    h = np.zeros((6, 6), dtype=complex)
    h[:4, :4] = hst
    h[4, 4] = spec.e_leak_plus
    h[5, 5] = spec.e_leak_minus
    # <udud|H|uudd> and <dduu|H|dudu>
    h[0, 4] = spec.coupling
    h[4, 0] = np.conj(spec.coupling)
    h[5, 3] = spec.coupling
    h[3, 5] = np.conj(spec.coupling)
    return h, spec


def project(h: np.ndarray, index) -> np.ndarray:
    return h[np.ix_(index, index)]


# ---------------------------------------------------------------- second order

ORACLE = "oracle"
VERBATIM = "verbatim"

LEAK2_ELEMENTS = (("udud", "uudd"), ("uddu", "uudd"), ("duud", "uudd"), ("dudu", "uudd"))
INT2_TERMS = ("xz", "yz", "zx", "zy")


@dataclass(frozen=True)
class CorrectionTerms:
    """Second-order leakage elements ``<c|H2|uudd>`` and interaction terms.

    ``leak2`` follows :data:`LEAK2_ELEMENTS`; the ``dduu`` column follows from
    ``<c'|H2|dduu> = -<c|H2|uudd>^*`` with ``c'`` the spin-flipped partner.
    ``int2`` holds the ``tau_a tau_b / 4`` coefficients in :data:`INT2_TERMS` order.
    """

    leak2: tuple[complex, complex, complex, complex]
    int2: tuple[float, float, float, float]
    gamma1: complex
    gamma2: complex
    beta_plus: complex
    beta_minus: complex
    c_mix1: float
    s_mix1: float
    c_mix2: float
    s_mix2: float
    form: str = ORACLE


def _gamma_helper(j: float, n: np.ndarray, angle: float, sign: int = 1) -> complex:
    return j * (n[0] + sign * 1j * n[1]) * np.sin(angle) * (np.cos(angle) + 1j * n[2] * np.sin(angle))


def second_order_corrections(p: SpinParams, form: str = ORACLE) -> CorrectionTerms:
    """Closed-form second-order corrections for Zeeman-dominated spins.

    The default ``"oracle"`` form agrees with :func:`numerical_second_order`.
    ``form="verbatim"`` keeps an uncorrected variant for comparison: full
    rotation angles in the leakage helpers and sine factors, the dot-2 angle in
    the third leakage element, the other beta pairing in the first element, and
    half the interaction prefactor. In both forms the bare ``n`` of the beta
    helpers is ``n^z``.
    """
    if form not in (ORACLE, VERBATIM):
        raise ValueError(f"unknown form {form!r}")
    _require_aligned(p)
    h1, h2, h3, h4 = p.hz
    if min(h1, h2, h3, h4) <= 0:
        raise ZeroZeemanField("second-order corrections need positive Zeeman splittings on all dots")
    jsc, j1, j2 = p.jsc, p.j1, p.j2
    phi, n = p.rotsc.angle, p.rotsc.n
    phi1, n1 = p.rot1.angle, p.rot1.n
    phi2, n2 = p.rot2.angle, p.rot2.n
    verbatim = form == VERBATIM
    scale = 1.0 if verbatim else 0.5

    g1 = _gamma_helper(j1, n1, -phi1 * scale)
    g2 = _gamma_helper(j2, n2, phi2 * scale)
    bp = _gamma_helper(jsc, n, phi * scale, +1)
    bm = _gamma_helper(jsc, n, phi * scale, -1)
    pair_12 = (1 / h1 + 1 / h2)
    pair_34 = (1 / h3 + 1 / h4)
    single = 1 / h2 + 1 / h3
    if verbatim:
        e1 = single / 16 * (g1 * bp + g2 * bm)
        sin2, sin2_1, sin2_2 = np.sin(phi) ** 2, np.sin(phi2) ** 2, np.sin(phi2) ** 2
    else:
        e1 = single / 4 * (g1 * bm + np.conj(g2) * bp)
        sin2, sin2_1, sin2_2 = np.sin(phi / 2) ** 2, np.sin(phi1 / 2) ** 2, np.sin(phi2 / 2) ** 2
    e2 = (-(1 / (h2 + h3) + 1 / (h3 + h4)) / 8 * jsc * j2
          * (n[0] + 1j * n[1]) ** 2 * (n2[0] - 1j * n2[1]) ** 2 * sin2 * sin2_2)
    e3 = ((1 / (h1 + h2) + 1 / (h2 + h3)) / 8 * jsc * j1
          * (n[0] - 1j * n[1]) ** 2 * (n1[0] + 1j * n1[1]) ** 2 * sin2 * sin2_1)

    c, s = np.cos(phi / 2), np.sin(phi / 2)
    c1, s1 = np.cos(phi1 / 2), np.sin(phi1 / 2)
    c2, s2 = np.cos(phi2 / 2), np.sin(phi2 / 2)
    dot1, cross1 = n1[0] * n[0] + n1[1] * n[1], n1[0] * n[1] - n1[1] * n[0]
    dot2, cross2 = n2[0] * n[0] + n2[1] * n[1], n2[0] * n[1] - n2[1] * n[0]
    cm1 = dot1 * c - cross1 * n[2] * s
    sm1 = cross1 * c + dot1 * n[2] * s
    cm2 = dot2 * c + cross2 * n[2] * s
    sm2 = cross2 * c - dot2 * n[2] * s
    k = 0.5 if verbatim else 1.0
    a1 = k * pair_12 * j1 * jsc * s1 * s
    a2 = k * pair_34 * j2 * jsc * s2 * s
    int2 = (
        -a1 * (cm1 * c1 + sm1 * n1[2] * s1),
        -a1 * (cm1 * n1[2] * s1 - sm1 * c1),
        a2 * (cm2 * c2 - sm2 * n2[2] * s2),
        -a2 * (-cm2 * n2[2] * s2 - sm2 * c2),
    )
    return CorrectionTerms(
        leak2=(complex(e1), complex(e2), complex(e3), 0j),
        int2=tuple(float(x) for x in int2),
        gamma1=complex(g1), gamma2=complex(g2), beta_plus=complex(bp), beta_minus=complex(bm),
        c_mix1=float(cm1), s_mix1=float(sm1), c_mix2=float(cm2), s_mix2=float(sm2),
        form=form,
    )


def zeeman_split(p: SpinParams) -> tuple[np.ndarray, np.ndarray]:
    """``(H0, V)`` with ``H0`` the diagonal Zeeman part and ``V`` the exchange."""
    _require_aligned(p)
    h = build_h_spin(p)
    h0 = np.diag(np.diag(build_h_spin(SpinParams(h=p.h))))
    return h0, h - h0


def _terms_from_block(h2: np.ndarray) -> tuple[tuple, tuple]:
    leak = tuple(complex(h2[i, 4]) for i in range(4))
    comp = h2[:4, :4]
    pairs = {"xz": (SX, SZ), "yz": (SY, SZ), "zx": (SZ, SX), "zy": (SZ, SY)}
    inter = tuple(float(np.real(np.trace(kron(*pairs[k]) @ comp))) for k in INT2_TERMS)
    return leak, inter


def numerical_second_order(p: SpinParams) -> tuple[tuple, tuple]:
    """Second-order part of the zero-magnetization block by numerical reduction.

    Returns ``(leak2, int2)`` laid out like :class:`CorrectionTerms`.
    """
    h0, v = zeeman_split(p)
    heff = schrieffer_wolff2(h0, v, SZERO_INDEX)
    return _terms_from_block(heff - project(h0 + v, SZERO_INDEX))

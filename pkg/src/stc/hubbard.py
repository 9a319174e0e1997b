"""Four-dot Fermi-Hubbard model with crossed Andreev pairing.

This is the brute-force side of every analytic reduction in the package: the
dot Hamiltonian is built on the 256-dim Fock space of eight fermionic modes
``(1u, 1d, 2u, 2d, 3u, 3d, 4u, 4d)`` and reduced numerically to the
single-occupation sector. The superconductor never appears as a Hilbert space;
it enters only through the pairing amplitude of the Andreev term.

Fock states are ``c†_0^{n_0} c†_1^{n_1} ... c†_7^{n_7} |0>`` (lowest mode
applied last), stored as integers whose most significant of eight bits is
mode 0. With this ordering the state ``|2u 2d 3u 3d>`` has a positive sign.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import DegenerateCrossing, OccupationWindowViolated, ResonantDenominator
from .linalg import eigh, max_abs
from .spin import EZ, Rotation3, SpinParams, anisotropic_exchange, rotation_matrix, site_pauli, spin_flip_unitary

N_MODES = 8
FOCK_DIM = 2**N_MODES
DEGENERACY_TOL = 1e-9

VARIANTS = ("main", "sm", "infinite_u")


def mode(dot: int, spin: int) -> int:
    """Mode index for ``dot`` in 1..4 and ``spin`` 0 (up) or 1 (down)."""
    return 2 * (dot - 1) + spin


def occupation(state: int, j: int) -> int:
    return (state >> (N_MODES - 1 - j)) & 1


@lru_cache(maxsize=None)
def annihilators() -> np.ndarray:
    """Integer matrices of ``c_j`` on the full Fock space, shape (8, 256, 256)."""
    ops = np.zeros((N_MODES, FOCK_DIM, FOCK_DIM), dtype=np.int64)
    for j in range(N_MODES):
        bit = 1 << (N_MODES - 1 - j)
        for s in range(FOCK_DIM):
            if s & bit:
                sign = -1 if bin(s >> (N_MODES - j)).count("1") % 2 else 1
                ops[j, s ^ bit, s] = sign
    ops.setflags(write=False)
    return ops


def number_of_particles(state: int) -> int:
    return bin(state).count("1")


def is_single_occupied(state: int) -> bool:
    return all(occupation(state, mode(d, 0)) + occupation(state, mode(d, 1)) == 1 for d in range(1, 5))


def has_double_occupancy(state: int) -> bool:
    return any(occupation(state, mode(d, 0)) and occupation(state, mode(d, 1)) for d in range(1, 5))


def spin_sector_state(spins: int) -> int:
    """Fock state of the product spin state with spin-basis index ``spins``."""
    state = 0
    for d in range(1, 5):
        s = (spins >> (4 - d)) & 1
        state |= 1 << (N_MODES - 1 - mode(d, s))
    return state


@dataclass(frozen=True)
class FockBasis:
    """Retained Fock states; ``infinite_u`` drops every doubly-occupied state."""

    infinite_u: bool = False
    states: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        states = [s for s in range(FOCK_DIM) if not (self.infinite_u and has_double_occupancy(s))]
        object.__setattr__(self, "states", np.array(states))

    @property
    def dim(self) -> int:
        return len(self.states)

    def restrict(self, op: np.ndarray) -> np.ndarray:
        return op[np.ix_(self.states, self.states)]

    def index_of(self, state: int) -> int:
        return int(np.searchsorted(self.states, state))

    def spin_sector(self) -> np.ndarray:
        """Basis positions of the 16 single-occupation states in spin-basis order."""
        return np.array([self.index_of(spin_sector_state(k)) for k in range(16)])

    def even_parity(self) -> np.ndarray:
        return np.array([i for i, s in enumerate(self.states) if number_of_particles(s) % 2 == 0])

    def parity_operator(self) -> np.ndarray:
        return np.diag([(-1.0) ** number_of_particles(s) for s in self.states])


def _hop(a: int, b: int) -> np.ndarray:
    """``c†_a c_b`` on the full Fock space."""
    c = annihilators()
    return c[a].T @ c[b]


def _pair(a: int, b: int) -> np.ndarray:
    """``c†_a c†_b`` on the full Fock space."""
    c = annihilators()
    return c[a].T @ c[b].T


def _number(j: int) -> np.ndarray:
    return _hop(j, j)


@dataclass(frozen=True, eq=False)
class HubbardParams:
    """Four-dot Hubbard parameters (ueV, radians).

    ``u = math.inf`` removes doubly-occupied states from the basis. ``u_ca``
    is the Coulomb energy entering the analytic Andreev exchange only (the
    Hubbard matrix uses ``u`` on every dot); it defaults to ``u``.
    """

    eps: tuple[float, float, float, float] = (-20.0, -20.0, -20.0, -20.0)
    u: float = 200.0
    t1: float = 0.0
    t2: float = 0.0
    gamma_ca: float = 0.0
    phi_u: float = 0.0
    phi_l: float = 0.0
    single_sc: bool = True
    rot1: Rotation3 = field(default_factory=Rotation3.identity)
    rot2: Rotation3 = field(default_factory=Rotation3.identity)
    rot_ca: Rotation3 = field(default_factory=Rotation3.identity)
    h: np.ndarray = field(default_factory=lambda: np.zeros((4, 3)))
    u_ca: float | None = None

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps)
        if len(eps) != 4:
            raise ValueError("eps needs four dot energies")
        h = np.array(self.h, dtype=float)
        if h.shape == (4,):
            h = np.outer(h, EZ)
        if h.shape != (4, 3):
            raise ValueError(f"h must hold four Zeeman vectors, got shape {h.shape}")
        h.setflags(write=False)
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "h", h)
        if not self.u > 0:
            raise ValueError("Coulomb energy must be positive")

    @property
    def infinite_u(self) -> bool:
        return math.isinf(self.u)

    @property
    def phase(self) -> float:
        return self.phi_u - self.phi_l

    @property
    def coulomb_ca(self) -> float:
        return self.u if self.u_ca is None else self.u_ca

    @property
    def pairing_amplitude(self) -> complex:
        """Andreev amplitude multiplying the pair-creation operator."""
        if self.single_sc:
            return complex(self.gamma_ca)
        # sin((pi - phase)/2) is cos(phase/2) with an exact zero at phase = pi
        return 2 * self.gamma_ca * math.sin((math.pi - self.phase) / 2) * np.exp(-0.5j * (self.phi_u + self.phi_l))

    def scaled(self, s: float) -> "HubbardParams":
        """Tunnelings scaled by ``s`` and Zeeman fields by ``s**2``."""
        return replace(self, t1=self.t1 * s, t2=self.t2 * s, gamma_ca=self.gamma_ca * s, h=self.h * s**2)

    def check_window(self) -> None:
        mags = np.linalg.norm(self.h, axis=1)
        for a, (e, hm) in enumerate(zip(self.eps, mags), start=1):
            for sgn in (1, -1):
                level = -e + sgn * hm / 2
                if not (0 < level < self.u):
                    raise OccupationWindowViolated(
                        f"dot {a}: -eps {'+' if sgn > 0 else '-'} h/2 = {level:g} outside (0, U)"
                    )

    def check_perturbative(self) -> None:
        mags = np.linalg.norm(self.h, axis=1)
        scales = [abs(e) for e in self.eps] + [self.u - abs(e) for e in self.eps]
        scales += [m for m in mags if m > 0]
        limit = 0.1 * min(scales)
        big = max(self.t1, self.t2, abs(self.gamma_ca))
        if big > limit:
            warnings.warn(
                f"tunneling {big:g} ueV exceeds 0.1 x smallest dot energy scale ({limit:g} ueV)",
                RuntimeWarning,
                stacklevel=3,
            )


def atomic_hamiltonian(p: HubbardParams) -> np.ndarray:
    """Diagonal part: dot energies and on-site Coulomb (no Zeeman)."""
    basis = FockBasis(p.infinite_u)
    diag = []
    for s in basis.states:
        e = 0.0
        for d in range(1, 5):
            nu, nd = occupation(s, mode(d, 0)), occupation(s, mode(d, 1))
            e += p.eps[d - 1] * (nu + nd)
            if nu and nd:
                e += p.u
        diag.append(e)
    return np.diag(np.array(diag, dtype=complex))


def build_h_dot(p: HubbardParams) -> np.ndarray:
    """Dot Hamiltonian with crossed Andreev pairing on the retained Fock basis."""
    p.check_window()
    p.check_perturbative()
    basis = FockBasis(p.infinite_u)
    pauli = (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]]))
    h = np.zeros((FOCK_DIM, FOCK_DIM), dtype=complex)
    for d in range(1, 5):
        hs = 0.5 * sum(p.h[d - 1, a] * pauli[a] for a in range(3))
        for s1 in range(2):
            for s2 in range(2):
                if hs[s1, s2] != 0:
                    h += hs[s1, s2] * _hop(mode(d, s1), mode(d, s2))
    for (src, dst), t, rot in (((1, 2), p.t1, p.rot1), ((3, 4), p.t2, p.rot2)):
        if t == 0:
            continue
        u = spin_flip_unitary(rot)
        term = sum(u[s1, s2] * _hop(mode(dst, s1), mode(src, s2)) for s1 in range(2) for s2 in range(2))
        h += t * (term + term.conj().T)
    amp = p.pairing_amplitude
    if amp != 0:
        ud = spin_flip_unitary(p.rot_ca).conj().T
        # (d†_2u, d†_2d) U† (-d†_3d, d†_3u)^T
        partner = ((-1, mode(3, 1)), (1, mode(3, 0)))
        term = sum(
            ud[s1, s2] * sign * _pair(mode(2, s1), m3)
            for s1 in range(2)
            for s2, (sign, m3) in enumerate(partner)
        )
        h += amp * term + np.conj(amp) * term.conj().T
    h = basis.restrict(h) + atomic_hamiltonian(p)
    return 0.5 * (h + h.conj().T)


def schrieffer_wolff2(h0: np.ndarray, v: np.ndarray, subspace) -> np.ndarray:
    """Second-order effective Hamiltonian on ``subspace``.

    ``h0`` must be diagonal in the working basis. Entries follow

        <m|H0 + V|m'> + 1/2 sum_l <m|V|l><l|V|m'> (1/(E_m - E_l) + 1/(E_m' - E_l))

    with ``l`` running over the complement.
    """
    h0 = np.asarray(h0)
    e = np.real(np.diag(h0)) if h0.ndim == 2 else np.real(h0)
    if h0.ndim == 2 and max_abs(h0 - np.diag(np.diag(h0))) > 0:
        raise ValueError("h0 must be diagonal")
    v = np.asarray(v, dtype=complex)
    a = np.asarray(subspace)
    b = np.setdiff1d(np.arange(len(e)), a)
    vab = v[np.ix_(a, b)]
    vba = v[np.ix_(b, a)]
    coupled = np.any(vab != 0, axis=0) | np.any(vba != 0, axis=1)
    ea, eb = e[a], e[b]
    gaps = ea[:, None] - eb[None, :]
    close = (np.abs(gaps) < DEGENERACY_TOL) & coupled[None, :]
    if close.any():
        i, j = np.argwhere(close)[0]
        raise DegenerateCrossing(f"state {a[i]} degenerate with coupled state {b[j]} (E = {ea[i]:g})")
    vmax = max_abs(vab)
    if coupled.any() and np.min(np.abs(gaps[:, coupled])) < 10 * vmax:
        warnings.warn("subspace gap is less than 10x the coupling; second order may be inaccurate",
                      RuntimeWarning, stacklevel=2)
    d = np.where(coupled[None, :], 1.0 / np.where(gaps == 0, 1.0, gaps), 0.0)
    second = 0.5 * ((vab * d) @ vba + vab @ (d.T * vba))
    heff = (np.diag(e) + v)[np.ix_(a, a)] if h0.ndim == 1 else (h0 + v)[np.ix_(a, a)]
    heff = heff + second
    return 0.5 * (heff + heff.conj().T)


def exact_effective_hamiltonian(h: np.ndarray, subspace, block=None) -> np.ndarray:
    """All-orders block-diagonalizing reduction onto ``subspace``.

    The eigenvectors with the largest weight on ``subspace`` span the target
    space; mapping them back by the polar factor of their overlap gives the
    canonical (direct-rotation) effective Hamiltonian, which coincides order by
    order with the Schrieffer-Wolff series. ``block`` restricts the
    diagonalization to an invariant index set containing ``subspace``.
    """
    h = np.asarray(h, dtype=complex)
    idx = np.arange(h.shape[0]) if block is None else np.asarray(block)
    sub = np.asarray(subspace)
    pos = np.searchsorted(idx, sub) if block is not None else sub
    if block is not None and not np.array_equal(idx[pos], sub):
        raise ValueError("block must contain the subspace")
    dec = eigh(h[np.ix_(idx, idx)])
    weights = np.sum(np.abs(dec.vectors[pos, :]) ** 2, axis=0)
    sel = np.sort(np.argsort(-weights, kind="stable")[: len(sub)])
    x = dec.vectors[np.ix_(pos, sel)]
    ov = eigh(x @ x.conj().T)
    if ov.values[0] < 1e-6:
        raise DegenerateCrossing("target eigenspace has (near) zero overlap with the subspace")
    inv_sqrt = (ov.vectors / np.sqrt(ov.values)) @ ov.vectors.conj().T
    w = inv_sqrt @ x
    heff = (w * dec.values[sel]) @ w.conj().T
    return 0.5 * (heff + heff.conj().T)


def sw_reduce(p: HubbardParams) -> np.ndarray:
    """Second-order reduction to the 16 single-occupation states (spin basis order).

    The unperturbed part is the atomic Hamiltonian; Zeeman, tunneling and
    Andreev terms form the perturbation.
    """
    basis = FockBasis(p.infinite_u)
    h = build_h_dot(p)
    h0 = atomic_hamiltonian(p)
    return schrieffer_wolff2(h0, h - h0, basis.spin_sector())


def exact_reduce(p: HubbardParams) -> np.ndarray:
    """All-orders reduction to the 16 single-occupation states (spin basis order)."""
    basis = FockBasis(p.infinite_u)
    return exact_effective_hamiltonian(build_h_dot(p), basis.spin_sector(), block=basis.even_parity())


def exchange_couplings(p: HubbardParams, variant: str = "main") -> tuple[float, float, float]:
    """Analytic ``(J1, J2, Jsc)`` in ueV.

    ``variant`` selects the Andreev denominator: ``"main"`` uses
    ``2U + eps2 + eps3``, ``"sm"`` uses ``U + eps2 + eps3`` and
    ``"infinite_u"`` drops every doubly-occupied virtual state.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    e1, e2, e3, e4 = p.eps
    js = []
    for i, (t, det) in enumerate(((p.t1, e1 - e2), (p.t2, e3 - e4)), start=1):
        if p.infinite_u:
            js.append(0.0)
            continue
        den = p.u**2 - det**2
        if den == 0:
            raise ResonantDenominator(f"U^2 - eps~_{i}^2", den)
        js.append(4 * t**2 * p.u / den)
    s = e2 + e3
    if s == 0:
        raise ResonantDenominator("eps2 + eps3", s)
    gamma2 = abs(p.pairing_amplitude) ** 2
    uca = p.coulomb_ca
    k = 2 if variant == "main" else 1
    if variant == "infinite_u":
        jsc = -4 * gamma2 / s
    elif math.isinf(uca):
        jsc = -4 * gamma2 / (k * s)
    else:
        den = k * uca + s
        if den == 0:
            raise ResonantDenominator("2U + eps2 + eps3" if k == 2 else "U + eps2 + eps3", den)
        jsc = -4 * gamma2 * uca / (s * den)
    return js[0], js[1], jsc


def gamma_ca_from_tunneling(t_s: float, rho_f: float, delta: float, bandwidth: float,
                            w_over_xi: float | None = None) -> float:
    """Crossed Andreev amplitude from a constant-density band of half-width ``bandwidth``.

    The band integral of ``delta / (delta^2 + e^2)`` gives ``2 arctan(W / delta)``;
    ``w_over_xi`` adds the ``exp(-2 w / xi)`` attenuation for wide leads.
    """
    if delta <= 0 or bandwidth <= 0 or rho_f <= 0:
        raise ValueError("delta, bandwidth and rho_f must be positive")
    gamma = 2 * t_s**2 * rho_f * math.atan(bandwidth / delta)
    if w_over_xi is not None:
        gamma *= math.exp(-2 * w_over_xi)
    return gamma


def spin_params_from_hubbard(p: HubbardParams, variant: str = "main") -> SpinParams:
    j1, j2, jsc = exchange_couplings(p, variant)
    return SpinParams(h=np.array(p.h), j1=j1, j2=j2, jsc=jsc, rot1=p.rot1, rotsc=p.rot_ca, rot2=p.rot2)


def extract_spin_couplings(heff: np.ndarray, p: HubbardParams | SpinParams) -> dict:
    """Project a 16x16 effective Hamiltonian on the anisotropic-exchange bonds.

    Returns the Hilbert-Schmidt coefficients ``j1, j2, jsc`` and the Zeeman
    vectors ``h`` (the bond rotations are taken from ``p``).
    """
    rots = (p.rot1, p.rot_ca, p.rot2) if isinstance(p, HubbardParams) else (p.rot1, p.rotsc, p.rot2)
    out = {}
    for name, (a, b), rot in (("j1", (0, 1), rots[0]), ("jsc", (1, 2), rots[1]), ("j2", (2, 3), rots[2])):
        x = anisotropic_exchange(a, b, rotation_matrix(rot))
        out[name] = float(4 * np.real(np.trace(x @ heff)) / np.real(np.trace(x @ x)))
    out["h"] = np.array([[2 * np.real(np.trace(site_pauli(s, k) @ heff)) / 16 for k in range(3)] for s in range(4)])
    return out


def coupling_mismatch(heff: np.ndarray, p: HubbardParams, variant: str = "main") -> tuple[float, float]:
    """``(absolute, relative)`` max-entry mismatch of traceless parts against the analytic spin model.

    The relative value is in units of the largest analytic coupling (equal to
    the absolute value when every coupling vanishes).
    """
    from .linalg import traceless
    from .spin import build_h_spin

    analytic = build_h_spin(spin_params_from_hubbard(p, variant))
    err = max_abs(traceless(heff) - traceless(analytic))
    scale = max(abs(j) for j in exchange_couplings(p, variant))
    return err, err / scale if scale > 0 else err


@dataclass(frozen=True)
class SwLevel:
    scale: float
    sw2_relative: float
    exact_absolute: float
    exact_relative: float


@dataclass(frozen=True)
class SwVerifyReport:
    levels: tuple[SwLevel, ...]
    fitted_order: float | None
    arbitration: dict
    winner: str | None


def fitted_order(scales, errors) -> float | None:
    """Least-squares slope of ``log(error)`` against ``log(scale)``."""
    scales, errors = np.asarray(scales, float), np.asarray(errors, float)
    if len(scales) < 2 or np.any(errors <= 0):
        return None
    return float(np.polyfit(np.log(scales), np.log(errors), 1)[0])


def arbitrate_variants(p: HubbardParams, ratio: float = 5.0) -> tuple[dict, str | None]:
    """Relative second-order mismatch of each finite-U variant at ``U = ratio |eps|``."""
    u = ratio * float(np.mean(np.abs(p.eps)))
    q = replace(p, u=u, u_ca=None)
    heff = sw_reduce(q)
    scores = {v: coupling_mismatch(heff, q, v)[1] for v in ("main", "sm")}
    if q.pairing_amplitude == 0:
        return scores, None
    return scores, min(scores, key=scores.get)


def sw_verify(p: HubbardParams, levels: int = 3, exact: bool = True) -> SwVerifyReport:
    """Compare numerical reductions with the analytic couplings at shrinking tunneling.

    Level ``k`` scales every tunneling by ``2**-k`` and the Zeeman fields by
    ``4**-k``, so the all-orders mismatch is a pure fourth-order remainder.
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    rows = []
    for k in range(levels):
        s = 2.0**-k
        q = p.scaled(s)
        sw2 = coupling_mismatch(sw_reduce(q), q)[1]
        ex_abs, ex_rel = coupling_mismatch(exact_reduce(q), q) if exact else (math.nan, math.nan)
        rows.append(SwLevel(s, sw2, ex_abs, ex_rel))
    order = fitted_order([r.scale for r in rows], [r.exact_absolute for r in rows]) if exact else None
    scores, winner = arbitrate_variants(p)
    return SwVerifyReport(tuple(rows), order, scores, winner)

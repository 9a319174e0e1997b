"""Gate dynamics on the full four-spin model: leakage, cZ fidelity, sweeps."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .constants import HBAR
from .effective import COMP_INDEX
from .errors import StcError, ZeroCoupling
from .linalg import EigenDecomposition, eigh
from .spin import SpinParams, UniformDevice, build_h_spin, gauge_align_zeeman, rotation_matrix

AVERAGE = "average"
SINGLE = "single"

ZERO_COUPLING_TOL = 1e-15
CZ_DIAG = np.exp(-0.25j * np.pi * np.array([1, -1, -1, 1]))
# local z-rotation weights on the computational basis for (tau_z^1, tau_z^2)
_A = np.array([1.0, 1.0, -1.0, -1.0])
_B = np.array([1.0, -1.0, 1.0, -1.0])


def gate_time(j_eff: float) -> float:
    """cZ gate time ``pi hbar / |j_eff|`` in ns."""
    if abs(j_eff) < ZERO_COUPLING_TOL:
        raise ZeroCoupling(f"effective Ising coupling {j_eff:g} ueV gives an infinite gate time")
    return np.pi * HBAR / abs(j_eff)


def ising_coupling(p: SpinParams) -> float:
    """Effective ``tau_z tau_z`` coupling ``Jsc gamma_par`` of the superconducting bond."""
    p = gauge_align_zeeman(p)
    return float(-p.jsc * rotation_matrix(p.rotsc)[2, 2])


@dataclass(frozen=True)
class LeakageTrace:
    times: np.ndarray
    values: np.ndarray
    mode: str = AVERAGE
    state: int | None = None


def computational_blocks(dec: EigenDecomposition, times) -> np.ndarray:
    """``P U(t) P`` on the computational basis for every time, shape (T, 4, 4)."""
    times = np.asarray(times, dtype=float)
    left = dec.vectors[COMP_INDEX, :]
    right = dec.vectors[COMP_INDEX, :].conj().T
    phases = np.exp(-1j * np.outer(times, dec.values) / HBAR)
    return np.einsum("ik,tk,kj->tij", left, phases, right)


def leakage_trace(p: SpinParams, times, mode: str = AVERAGE, state: int | None = None) -> LeakageTrace:
    """Population leaving the computational subspace under ``H_spin``.

    ``AVERAGE`` averages over the four computational basis states, which equals
    ``1 - ||P U P||_F^2 / 4``; ``SINGLE`` starts from computational state ``state``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be a non-negative ascending sequence")
    blocks = computational_blocks(eigh(build_h_spin(p)), times)
    weights = np.abs(blocks) ** 2
    if mode == AVERAGE:
        values = 1.0 - weights.sum(axis=(1, 2)) / 4
    elif mode == SINGLE:
        if state not in range(4):
            raise ValueError("SINGLE mode needs a computational state index 0..3")
        values = 1.0 - weights[:, :, state].sum(axis=1)
    else:
        raise ValueError(f"unknown leakage mode {mode!r}")
    return LeakageTrace(times, np.clip(values, 0.0, 1.0), mode, state)


def _trace_terms(u_block: np.ndarray) -> np.ndarray:
    return np.conj(CZ_DIAG) * np.diag(u_block)


def _overlap(c: np.ndarray, alpha, beta):
    theta = 0.5 * (np.multiply.outer(alpha, _A) + np.multiply.outer(beta, _B))
    return np.sum(c * np.exp(1j * theta), axis=-1)


def _refine(c: np.ndarray, alpha: float, beta: float) -> tuple[float, float]:
    """Newton ascent of ``|sum_k c_k exp(i theta_k)|^2`` from a grid point."""
    da, db = 0.5j * _A, 0.5j * _B
    for _ in range(50):
        e = c * np.exp(0.5j * (alpha * _A + beta * _B))
        t = e.sum()
        ta, tb = (da * e).sum(), (db * e).sum()
        taa, tab, tbb = (da * da * e).sum(), (da * db * e).sum(), (db * db * e).sum()
        grad = 2 * np.real(np.conj(t) * np.array([ta, tb]))
        if np.linalg.norm(grad) < 1e-12:
            break
        hess = 2 * np.real(np.array([
            [abs(ta) ** 2 + np.conj(t) * taa, np.conj(ta) * tb + np.conj(t) * tab],
            [np.conj(tb) * ta + np.conj(t) * tab, abs(tb) ** 2 + np.conj(t) * tbb],
        ]))
        if np.all(np.linalg.eigvalsh(hess) < 0):
            step = -np.linalg.solve(hess, grad)
        else:
            step = 0.1 * grad
        alpha, beta = alpha + step[0], beta + step[1]
    return alpha, beta


def gate_fidelity(u_block: np.ndarray) -> tuple[float, float, float, float]:
    """``(raw, optimized, alpha, beta)`` cZ fidelity of a 4x4 computational block.

    The optimized value maximizes over local phases ``exp(i alpha tau_z^1 / 2)
    exp(i beta tau_z^2 / 2)``; only the diagonal of ``u_block`` enters.
    """
    c = _trace_terms(np.asarray(u_block))
    raw = abs(c.sum()) ** 2 / 16
    grid = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    vals = np.abs(_overlap(c, grid[:, None], grid[None, :])) ** 2
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    alpha, beta = _refine(c, grid[i], grid[j])
    best = max(abs(_overlap(c, alpha, beta)) ** 2, vals[i, j]) / 16
    return float(raw), float(max(best, raw)), float(alpha), float(beta)


@dataclass(frozen=True)
class GateReport:
    t_gate: float
    fidelity_raw: float
    fidelity_optimized: float
    infidelity: float
    leakage_max: float
    leakage_final: float


def cz_fidelity(p: SpinParams, samples: int = 257) -> GateReport:
    """Evolve ``H_spin`` for the analytic gate time and score it against cZ.

    Leakage is the averaged measure sampled on ``samples`` points of ``[0, T_g]``.
    """
    p = gauge_align_zeeman(p)
    tg = gate_time(ising_coupling(p))
    dec = eigh(build_h_spin(p))
    block = computational_blocks(dec, [tg])[0]
    raw, opt, _, _ = gate_fidelity(block)
    window = computational_blocks(dec, np.linspace(0.0, tg, samples))
    leak = np.clip(1.0 - (np.abs(window) ** 2).sum(axis=(1, 2)) / 4, 0.0, 1.0)
    return GateReport(tg, raw, opt, 1.0 - opt, float(leak.max()), float(leak[-1]))


SWEEP_AXES = tuple(f.name for f in fields(UniformDevice))


@dataclass(frozen=True)
class SweepRow:
    point: dict
    report: GateReport | None
    error: str | None = None


def _evaluate(device: UniformDevice) -> tuple[GateReport | None, str | None]:
    try:
        return cz_fidelity(device.spin_params()), None
    except StcError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def grid_points(axes: dict[str, list[float]], allowed=SWEEP_AXES) -> list[dict]:
    """Row-major (last axis fastest) list of grid points."""
    for name, values in axes.items():
        if name not in allowed:
            raise ValueError(f"unknown sweep axis {name!r}; choose from {tuple(allowed)}")
        if len(values) < 1 or not np.all(np.isfinite(values)):
            raise ValueError(f"axis {name!r} needs at least one finite value")
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def fidelity_map(base: UniformDevice, axes: dict[str, list[float]], workers: int = 1) -> list[SweepRow]:
    """cZ reports over a row-major grid of device parameters.

    Points are independent; with ``workers > 1`` they run in a process pool but
    rows keep grid order. Physics errors are stored in the row.
    """
    points = grid_points(axes)
    devices = [replace(base, **pt) for pt in points]
    if workers > 1 and len(devices) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, devices, chunksize=max(1, len(devices) // (4 * workers))))
    else:
        results = [_evaluate(d) for d in devices]
    return [SweepRow(pt, rep, err) for pt, (rep, err) in zip(points, results)]

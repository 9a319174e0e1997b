"""Dense complex linear algebra used throughout the package.

Operators are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi method acting on the real-symmetric embedding

    S = [[Re H, -Im H],
         [Im H,  Re H]]

whose spectrum is that of ``H`` with every eigenvalue doubled. Rotations are
applied in round-robin order so that each round of ``n/2`` disjoint rotations
is a single vectorized update.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .constants import HBAR
from .errors import NonHermitianInput

HERMITIAN_RTOL = 1e-12
UNITARY_TOL = 1e-10
JACOBI_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
_CLUSTER_RTOL = 1e-11


class EigenDecomposition(NamedTuple):
    values: np.ndarray  # ascending, real
    vectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, entry ``(i*nb + k, j*mb + l) = a[i, j] * b[k, l]``."""
    a = np.asarray(a)
    b = np.asarray(b)
    na, ma = a.shape
    nb, mb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(na * nb, ma * mb)


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = kron(out, op)
    return out


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def hermiticity_error(h: np.ndarray) -> float:
    return max_abs(h - h.conj().T)


def check_hermitian(h) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NonHermitianInput(f"expected a square matrix, got shape {h.shape}")
    err = hermiticity_error(h)
    if err > HERMITIAN_RTOL * max(1.0, max_abs(h)):
        raise NonHermitianInput(f"matrix is not Hermitian (max |H - H^dag| = {err:.3e})")
    return h


def unitarity_error(u: np.ndarray) -> float:
    u = np.asarray(u)
    return max_abs(u.conj().T @ u - np.eye(u.shape[0]))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(u) <= tol


def traceless(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    n = h.shape[0]
    return h - np.trace(h) / n * np.eye(n)


def _round_robin(n: int) -> list[np.ndarray]:
    """Per-round arrangements of ``0..n-1`` where pairs sit at ``(2i, 2i+1)``.

    Over ``n - 1`` rounds every index pair meets exactly once.
    """
    idx = list(range(n))
    arrangements = []
    for _ in range(n - 1):
        arr = []
        for i in range(n // 2):
            arr += [idx[i], idx[n - 1 - i]]
        arrangements.append(np.array(arr))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return arrangements


_SCHEDULE_CACHE: dict[int, tuple[np.ndarray, list[np.ndarray]]] = {}


def _schedule(n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Initial arrangement plus the position shuffles taking round r to r+1."""
    if n not in _SCHEDULE_CACHE:
        arrs = _round_robin(n)
        steps = []
        for r in range(len(arrs)):
            cur, nxt = arrs[r], arrs[(r + 1) % len(arrs)]
            where = np.empty(n, dtype=int)
            where[cur] = np.arange(n)
            steps.append(where[nxt])
        _SCHEDULE_CACHE[n] = (arrs[0], steps)
    return _SCHEDULE_CACHE[n]


def _pair_rotations(a: np.ndarray) -> np.ndarray:
    """Rotation ``c + i s`` annihilating ``a[2i, 2i+1]`` for every adjacent pair."""
    app = a[0::2, 0::2].diagonal()
    aqq = a[1::2, 1::2].diagonal()
    apq = a[0::2, 1::2].diagonal()
    nz = apq != 0.0
    # tiny apq overflows theta to inf, which correctly yields t = 0
    with np.errstate(over="ignore"):
        theta = (aqq - app) / (2.0 * np.where(nz, apq, 1.0))
        sign = np.where(theta >= 0.0, 1.0, -1.0)
        t = np.where(nz, sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c + 1j * (t * c)


def _rotate_columns(x: np.ndarray, w: np.ndarray) -> None:
    # columns (2i, 2i+1) -> (c x - s y, s x + c y) is a complex multiply by c + i s
    x.view(np.complex128)[...] *= w


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_symmetric(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Diagonalize a real symmetric matrix of even order by cyclic Jacobi.

    Returns ``(diag, vectors, sweeps)``; eigenvalues are not sorted.
    Converged when the off-diagonal Frobenius norm drops below
    ``JACOBI_RTOL * ||a||_F``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy(), np.eye(1), 0
    if n % 2:
        raise ValueError("jacobi_symmetric expects an even dimension")
    arrangement, steps = _schedule(n)
    target = JACOBI_RTOL * np.linalg.norm(a)
    # work in the permuted frame; ``perm[j]`` is the original index at position j
    perm = arrangement.copy()
    a = a[np.ix_(perm, perm)]
    v = np.eye(n)
    sweeps = 0
    while sweeps < JACOBI_MAX_SWEEPS and _off_norm(a) > target:
        sweeps += 1
        for step in steps:
            w = _pair_rotations(a)
            _rotate_columns(a, w)
            # row rotation of a symmetric matrix = column rotation of its transpose
            a = np.ascontiguousarray(a.T)
            _rotate_columns(a, w)
            k = np.arange(0, n, 2)
            a[k, k + 1] = 0.0
            a[k + 1, k] = 0.0
            _rotate_columns(v, w)
            a = np.ascontiguousarray(a[np.ix_(step, step)])
            v = np.ascontiguousarray(v.take(step, axis=1))
            perm = perm[step]
    if _off_norm(a) > target:
        warnings.warn(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps", RuntimeWarning)
    # v maps permuted coordinates to eigenvectors; restore original row order
    vectors = np.empty_like(v)
    vectors[perm, :] = v
    return a.diagonal().copy(), vectors, sweeps


def _fix_phase(z: np.ndarray) -> np.ndarray:
    mags = np.abs(z)
    i = int(np.argmax(mags > 1e-8 * mags.max()))
    return z * (np.conj(z[i]) / mags[i])


def eigh(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix (values ascending).

    Eigenvector phases are fixed so that the first non-negligible component
    is real and positive.
    """
    h = check_hermitian(h)
    h = 0.5 * (h + h.conj().T)
    n = h.shape[0]
    re, im = h.real, h.imag
    emb = np.block([[re, -im], [im, re]])
    lam, w, _ = jacobi_symmetric(emb)
    order = np.argsort(lam, kind="stable")
    lam, w = lam[order], w[:, order]
    cand = w[:n, :] + 1j * w[n:, :]

    tol = _CLUSTER_RTOL * max(1.0, max_abs(h))
    clusters: list[list[int]] = []
    for j in range(2 * n):
        if clusters and lam[j] - lam[clusters[-1][-1]] <= tol:
            clusters[-1].append(j)
        elif clusters and len(clusters[-1]) % 2:
            clusters[-1].append(j)
        else:
            clusters.append([j])

    # Close but distinct eigenvalues leave O(residual / gap) cross-talk between
    # clusters, so each cluster is also orthogonalized against all earlier ones.
    accepted = np.zeros((n, n), dtype=complex)
    m = 0
    for cl in clusters:
        k = len(cl) // 2
        z = cand[:, cl].copy()
        for _ in range(2):
            z -= accepted[:, :m] @ (accepted[:, :m].conj().T @ z)
        for _ in range(k):
            norms = np.linalg.norm(z, axis=0)
            j = int(np.argmax(norms))
            b = z[:, j] / norms[j]
            for _ in range(2):
                b = b - accepted[:, :m] @ (accepted[:, :m].conj().T @ b)
                b = b / np.linalg.norm(b)
            accepted[:, m] = b
            m += 1
            z -= np.outer(b, b.conj() @ z)
    vectors = np.array([_fix_phase(b) for b in accepted.T]).T
    values = np.real(np.einsum("ij,ij->j", vectors.conj(), h @ vectors))
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], vectors[:, order])


def propagator(dec: EigenDecomposition, t: float) -> np.ndarray:
    """``exp(-i H t / hbar)`` from a precomputed decomposition (``t`` in ns)."""
    phases = np.exp(-1j * dec.values * (t / HBAR))
    return (dec.vectors * phases) @ dec.vectors.conj().T


def evolve(h, t: float) -> np.ndarray:
    """Unitary ``exp(-i H t / hbar)`` with ``H`` in ueV and ``t`` in ns."""
    if not np.isfinite(t):
        raise ValueError("evolution time must be finite")
    return propagator(eigh(h), t)

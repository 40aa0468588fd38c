"""Small-dimension complex linear algebra.

Every matrix here is a plain ``numpy.ndarray``. Two-qubit operators use the
basis ordering |00>, |01>, |10>, |11> with subsystem A as the left tensor
factor, so row index = i_A * 2 + i_B.

Functions that act on 4x4 operators also accept stacks of shape
``(..., 4, 4)``; the SDP solver relies on that to iterate many states at
once.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NonHermitian, NotPositiveSemidefinite

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

HERMITIAN_TOL = 1e-8
# eigenvalues in [-PSD_TOL, 0) are treated as exact zeros
PSD_TOL = 1e-10
NEGATIVE_TOL = 1e-8


class Spectrum(NamedTuple):
    """Eigenvalues in ascending order and matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_defect(m):
    """Largest entrywise deviation of ``m`` from Hermiticity."""
    return float(np.max(np.abs(m - dagger(m))))


def _as_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionMismatch(f"expected square matrix, got shape {m.shape}")
    _check_finite(m)
    if hermitian_defect(m) > tol:
        raise NonHermitian(f"asymmetry {hermitian_defect(m):.3e} exceeds {tol:g}")
    return 0.5 * (m + dagger(m))


def kron(a, b):
    """Kronecker product with row index ``i_a * rows_b + i_b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_finite(a, b)
    return np.kron(a, b)


def hermitian_eigensystem(m) -> Spectrum:
    """Full eigendecomposition of a Hermitian matrix (or stack).

    The input is symmetrized before diagonalization. Backed by LAPACK
    ``heevd`` through numpy, which is deterministic for identical input;
    :func:`jacobi_eigensystem` is the dependency-free reference.
    """
    h = _as_hermitian(m)
    w, v = np.linalg.eigh(h)
    return Spectrum(w, v)


def jacobi_eigensystem(m, tol=1e-13, max_sweeps=100) -> Spectrum:
    """Cyclic Jacobi diagonalization of a single Hermitian matrix.

    Each rotation first removes the phase of the pivot element, then applies
    a real Givens rotation. Converges quadratically for the tiny matrices
    used here; raises ``RuntimeError`` if the off-diagonal norm is still
    above ``tol`` after ``max_sweeps``.
    """
    a = _as_hermitian(m).copy()
    if a.ndim != 2:
        raise DimensionMismatch("jacobi_eigensystem takes a single matrix")
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                theta = 0.5 * np.arctan2(2.0 * mag, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[q, q] = c
                j[p, q] = s * phase
                j[q, p] = -s * np.conj(phase)
                a = dagger(j) @ a @ j
                v = v @ j
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], v[:, order])


def svd3(t):
    """Singular values (descending) and determinant sign of a real 3x3 matrix.

    Returns ``(sigma, det_sign)`` with ``det_sign`` in {-1, 0, +1}. A
    determinant smaller in magnitude than ``1e-12`` counts as zero.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise DimensionMismatch(f"svd3 expects a 3x3 matrix, got {t.shape}")
    _check_finite(t)
    sigma = np.linalg.svd(t, compute_uv=False)
    det = np.linalg.det(t)
    det_sign = 0 if abs(det) <= 1e-12 else int(np.sign(det))
    return sigma, det_sign


def partial_transpose(rho, subsystem="B"):
    """Partial transpose of a two-qubit operator (or stack) on A or B."""
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise DimensionMismatch(f"expected 4x4 operator, got {rho.shape}")
    lead = rho.shape[:-2]
    r = rho.reshape(lead + (2, 2, 2, 2))
    k = len(lead)
    axes = list(range(k))
    if subsystem == "B":
        axes += [k, k + 3, k + 2, k + 1]
    elif subsystem == "A":
        axes += [k + 2, k + 1, k, k + 3]
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return r.transpose(axes).reshape(rho.shape)


def partial_trace(rho, discard, dims=None):
    """Trace out one tensor factor.

    ``dims`` defaults to ``(2, 2)`` for 4x4 input and ``(2, 2, 2)`` for 8x8
    input. ``discard`` is a factor index, or one of ``"A"``, ``"B"``, ``"C"``.
    """
    rho = np.asarray(rho)
    if dims is None:
        dims = {4: (2, 2), 8: (2, 2, 2)}.get(rho.shape[0])
    if dims is None or rho.shape != (int(np.prod(dims)),) * 2:
        raise DimensionMismatch(f"cannot split shape {rho.shape} into qubits")
    if isinstance(discard, str):
        discard = "ABC".index(discard)
    if not 0 <= discard < len(dims):
        raise DimensionMismatch(f"no factor {discard} in dims {dims}")
    n = len(dims)
    r = rho.reshape(tuple(dims) * 2)
    r = np.trace(r, axis1=discard, axis2=discard + n)
    keep = int(np.prod(dims)) // dims[discard]
    return r.reshape(keep, keep)


def spectral_clip(m, lo, hi):
    """Frobenius-nearest Hermitian matrix with spectrum inside ``[lo, hi]``."""
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    w, v = np.linalg.eigh(_as_hermitian(m))
    w = np.clip(w, lo, hi)
    return (v * w[..., None, :]) @ dagger(v)


def matrix_sqrt_psd(m):
    """Unique positive-semidefinite square root.

    Eigenvalues at the rounding-noise level of the largest one are set to
    zero so that rank-deficient inputs keep an exact null space.
    """
    w, v = np.linalg.eigh(_as_hermitian(m))
    if w.size and w.min() < -NEGATIVE_TOL:
        raise NotPositiveSemidefinite(f"eigenvalue {w.min():.3e} < 0")
    scale = max(float(np.max(np.abs(w))), 1.0) if w.size else 1.0
    w = np.where(w < 16 * np.finfo(float).eps * scale, 0.0, w)
    return (v * np.sqrt(w)[..., None, :]) @ dagger(v)

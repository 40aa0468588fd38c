"""Concurrence, singlet fraction, fully entangled fraction, negativity and bounds.

The fully entangled fraction has two routes: :func:`fef` evaluates the
closed form over the singular values of the correlation matrix, and
:func:`fef_bruteforce` maximizes the overlap with (I (x) U)|phi+> directly
over single-qubit unitaries. The second is only used to check the first.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import kernel
from .states import bell_ket, bloch_decompose, validate_state

BOUND_SLACK = 1e-9

_SIGMA_YY = kernel.kron(kernel.SIGMA_Y, kernel.SIGMA_Y)


def concurrence(rho):
    """Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the singular values of sqrt(rho) * sqrt(rho~), which are the
    square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho). Taking
    singular values directly avoids the square-root amplification of
    rounding noise on rank-deficient states.
    """
    rho = validate_state(rho)
    root = kernel.matrix_sqrt_psd(rho)
    root_tilde = _SIGMA_YY @ root.conj() @ _SIGMA_YY
    lam = np.linalg.svd(root @ root_tilde, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def singlet_fraction(rho):
    """Overlap <psi-|rho|psi->."""
    psi = bell_ket("psi-")
    return float(np.real(psi.conj() @ np.asarray(rho) @ psi))


def fef(rho):
    """Fully entangled fraction from the correlation matrix.

    With sigma the singular values of T (descending),
    f = (1 + s1 + s2 + s3)/4 if det T <= 0, else (1 + s1 + s2 - s3)/4.
    """
    sigma, det_sign = kernel.svd3(bloch_decompose(rho).T)
    if det_sign <= 0:
        return float(0.25 * (1.0 + sigma.sum()))
    return float(0.25 * (1.0 + sigma[0] + sigma[1] - sigma[2]))


def su2(angles):
    """Z-Y-Z Euler unitaries; ``angles`` has trailing axis (phi, theta, lam)."""
    angles = np.asarray(angles, dtype=float)
    phi, theta, lam = angles[..., 0], angles[..., 1], angles[..., 2]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    u = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = np.exp(-0.5j * (phi + lam)) * c
    u[..., 0, 1] = -np.exp(-0.5j * (phi - lam)) * s
    u[..., 1, 0] = np.exp(0.5j * (phi - lam)) * s
    u[..., 1, 1] = np.exp(0.5j * (phi + lam)) * c
    return u


def _overlaps(rho, angles):
    # (I (x) U)|phi+> has amplitudes U[b, a] / sqrt2 at index 2a + b
    u = su2(angles)
    psi = np.swapaxes(u, -1, -2).reshape(u.shape[:-2] + (4,)) / np.sqrt(2.0)
    return np.real(np.einsum("...i,ij,...j->...", psi.conj(), rho, psi))


def fef_bruteforce(rho, grid=24, refine_iter=200):
    """Maximize <phi+|(I (x) U^dag) rho (I (x) U)|phi+> over U in SU(2).

    Scans a ``grid**3`` lattice of Euler angles, then polishes the best
    point with Nelder-Mead. The result is a lower bound on the true value.
    """
    rho = validate_state(rho)
    phi = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    theta = np.linspace(0.0, np.pi, grid)
    lam = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    mesh = np.stack(np.meshgrid(phi, theta, lam, indexing="ij"), axis=-1).reshape(-1, 3)
    values = _overlaps(rho, mesh)
    start = mesh[int(np.argmax(values))]
    res = minimize(
        lambda x: -_overlaps(rho, x),
        start,
        method="Nelder-Mead",
        options={"maxiter": refine_iter, "xatol": 1e-10, "fatol": 1e-14},
    )
    return float(max(values.max(), -res.fun))


def negativity(rho):
    """||rho^T_B||_1 - 1, i.e. twice the magnitude of the negative eigenvalue."""
    rho = validate_state(rho)
    lam_min = np.linalg.eigvalsh(kernel.partial_transpose(rho))[0]
    return float(2.0 * max(0.0, -lam_min))


@dataclass(frozen=True)
class BoundAudit:
    """Outcome of the fidelity bound checks for one state.

    ``lower`` is f >= max((1+C)/4, C), ``upper`` is f <= (1+C)/2,
    ``saturated`` marks equality in the upper bound and ``negativity_bound``
    is f* <= (1+N)/2 (``None`` without a MAF value). ``maf_concurrence``
    applies the concurrence upper bound to f*.
    """

    lower: bool
    upper: bool
    saturated: bool
    negativity_bound: Optional[bool] = None
    maf_concurrence: Optional[bool] = None

    @property
    def ok(self):
        return self.lower and self.upper and self.negativity_bound is not False and self.maf_concurrence is not False


def audit_bounds(rho, f_star=None, slack=BOUND_SLACK, *, C=None, f=None, N=None) -> BoundAudit:
    """Check the concurrence/negativity fidelity bounds on ``rho``.

    Precomputed measures may be passed as keywords to avoid recomputation.
    """
    C = concurrence(rho) if C is None else C
    f = fef(rho) if f is None else f
    upper = 0.5 * (1.0 + C)
    neg_ok = maf_ok = None
    if f_star is not None:
        N = negativity(rho) if N is None else N
        neg_ok = bool(f_star <= 0.5 * (1.0 + N) + slack)
        maf_ok = bool(f_star <= upper + slack)
    return BoundAudit(
        lower=bool(f >= max(0.25 * (1.0 + C), C) - slack),
        upper=bool(f <= upper + slack),
        saturated=bool(abs(f - upper) <= slack),
        negativity_bound=neg_ok,
        maf_concurrence=maf_ok,
    )


@dataclass(frozen=True)
class MeasureReport:
    concurrence: float
    singlet_fraction: float
    fef: float
    negativity: float
    bounds: BoundAudit
    maf: Optional[float] = None
    maf_residual: Optional[float] = None
    maf_iterations: Optional[int] = None

    def to_dict(self):
        d = asdict(self)
        if self.maf is None:
            for key in ("maf", "maf_residual", "maf_iterations"):
                d.pop(key)
        return d


def measure_report(rho, maf_solution=None) -> MeasureReport:
    """All measures of ``rho``; pass an ``SdpSolution`` to include the MAF."""
    rho = validate_state(rho)
    C, f, N = concurrence(rho), fef(rho), negativity(rho)
    f_star = None if maf_solution is None else maf_solution.f_star
    report = MeasureReport(
        concurrence=C,
        singlet_fraction=singlet_fraction(rho),
        fef=f,
        negativity=N,
        bounds=audit_bounds(rho, f_star, C=C, f=f, N=N),
    )
    if maf_solution is not None:
        report = replace(
            report,
            maf=maf_solution.f_star,
            maf_residual=maf_solution.residual,
            maf_iterations=maf_solution.iterations,
        )
    return report

"""Maximal achievable fidelity by trace-preserving LOCC.

The value is the optimum of the semidefinite program

    maximize   1/2 - Tr(X rho^Gamma)
    subject to 0 <= X <= I,   -I/2 <= X^Gamma <= I/2,

solved here by ADMM on the split X (first box) / Y = X^Gamma (second box).
Both boxes project in closed form by clipping eigenvalues, and the partial
transpose is an isometry, so every subproblem is a single projection:

    X <- clip_[0,1]((Y - U)^Gamma - rho^Gamma / penalty)
    Y <- clip_[-1/2,1/2](X^Gamma + U)
    U <- U + X^Gamma - Y

The iteration runs on a stack of states at once. Each state is frozen at
the first iterate whose primal and dual residuals are both under the
tolerance, so its result does not depend on what else is in the batch.

Two closed forms, for the X-state and amplitude-damped families, serve as
oracles for the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, NotConverged
from .kernel import dagger, partial_transpose
from .states import SQRT2, validate_state

# upper end of the interval on which no LOCC protocol beats doing nothing
DAMPED_BREAKPOINT = (SQRT2 + 1.0) * (np.sqrt(7.0 + 2.0 * SQRT2) - SQRT2 - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-7
    max_iterations: int = 50000
    penalty: float = 1.0

    def __post_init__(self):
        if self.tolerance <= 0 or self.max_iterations <= 0 or self.penalty <= 0:
            raise ValueError("solver settings must be positive")


@dataclass(frozen=True)
class SdpSolution:
    """Optimal value, a feasible filter X achieving it, and diagnostics."""

    f_star: float
    X: np.ndarray
    iterations: int
    residual: float
    converged: bool = True


def _clip(m, lo, hi):
    w, v = np.linalg.eigh(m)
    return (v * np.clip(w, lo, hi)[..., None, :]) @ dagger(v)


def _restore_feasibility(X):
    # X is in the [0, 1] box by construction; shrinking toward X = 0 pulls
    # X^Gamma back inside the [-1/2, 1/2] box without leaving the first one
    w = np.linalg.eigvalsh(partial_transpose(X))
    excess = max(0.0, float(np.max(np.abs(w))) - 0.5)
    return X * (0.5 / (0.5 + excess))


def _objective(rho_pt, X):
    return float(0.5 - np.real(np.trace(X @ rho_pt)))


def maf_sdp_batch(rhos, cfg: SolverConfig = SolverConfig()):
    """Solve the MAF program for each state in ``rhos``; never raises on non-convergence.

    Returns a list of :class:`SdpSolution`; check ``converged`` on each.
    """
    rhos = [validate_state(r) for r in rhos]
    n = len(rhos)
    if n == 0:
        return []
    R = partial_transpose(np.array(rhos))
    pen = cfg.penalty
    X = np.zeros_like(R)
    Y = np.zeros_like(R)
    U = np.zeros_like(R)
    active = np.arange(n)
    final_X = np.zeros_like(R)
    iterations = np.full(n, cfg.max_iterations)
    residuals = np.full(n, np.inf)
    converged = np.zeros(n, dtype=bool)

    for it in range(1, cfg.max_iterations + 1):
        Ra, Ya, Ua = R[active], Y[active], U[active]
        Xa = _clip(partial_transpose(Ya - Ua) - Ra / pen, 0.0, 1.0)
        XaG = partial_transpose(Xa)
        Yn = _clip(XaG + Ua, -0.5, 0.5)
        Un = Ua + XaG - Yn
        primal = np.linalg.norm(XaG - Yn, axis=(-2, -1))
        dual = pen * np.linalg.norm(Yn - Ya, axis=(-2, -1))
        res = np.maximum(primal, dual)
        X[active], Y[active], U[active] = Xa, Yn, Un
        residuals[active] = res
        done = res < cfg.tolerance
        if done.any():
            idx = active[done]
            final_X[idx] = Xa[done]
            iterations[idx] = it
            converged[idx] = True
            active = active[~done]
            if active.size == 0:
                break
    final_X[active] = X[active]

    out = []
    for k in range(n):
        Xk = _restore_feasibility(0.5 * (final_X[k] + dagger(final_X[k])))
        out.append(
            SdpSolution(
                f_star=_objective(R[k], Xk),
                X=Xk,
                iterations=int(iterations[k]),
                residual=float(residuals[k]),
                converged=bool(converged[k]),
            )
        )
    return out


def maf_sdp(rho, cfg: SolverConfig = SolverConfig()) -> SdpSolution:
    """Maximal achievable fidelity of one state.

    Raises :class:`NotConverged` (carrying the last, feasible iterate) when
    the residual is still above tolerance after ``cfg.max_iterations``.
    """
    (sol,) = maf_sdp_batch([rho], cfg)
    if not sol.converged:
        raise NotConverged(
            f"residual {sol.residual:.3e} after {sol.iterations} iterations", solution=sol
        )
    return sol


def extract_protocol_fidelity(rho, X, tol=1e-6):
    """Objective 1/2 - Tr(X rho^Gamma) for a candidate filter ``X``.

    Raises :class:`Infeasible` if ``X`` breaks either spectral box by more
    than ``tol``.
    """
    rho = validate_state(rho)
    X = np.asarray(X, dtype=complex)
    if X.shape != (4, 4) or np.max(np.abs(X - dagger(X))) > tol:
        raise Infeasible("X must be a 4x4 Hermitian matrix")
    w = np.linalg.eigvalsh(X)
    wg = np.linalg.eigvalsh(partial_transpose(X))
    if w[0] < -tol or w[-1] > 1.0 + tol:
        raise Infeasible(f"spectrum of X spans [{w[0]:.3g}, {w[-1]:.3g}], outside [0, 1]")
    if wg[0] < -0.5 - tol or wg[-1] > 0.5 + tol:
        raise Infeasible(f"spectrum of X^Gamma spans [{wg[0]:.3g}, {wg[-1]:.3g}], outside [-1/2, 1/2]")
    return _objective(partial_transpose(rho), X)


def maf_closed_x_state(F):
    """Closed-form MAF of F|phi+><phi+| + (1-F)|01><01|."""
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {F!r}")
    if F >= 2.0 / 3.0:
        return float(F)
    return 0.5 * (1.0 + F * F / (4.0 * (1.0 - F)))


def maf_closed_damped(p):
    """Closed-form MAF of the amplitude-damped family.

    Linear up to p = 3/4, equal to the fully entangled fraction up to
    :data:`DAMPED_BREAKPOINT`, then a rational branch reaching 1/2 at p = 1.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p <= 0.75:
        return (-1.5 + SQRT2) / 2.0 * p + (SQRT2 + 3.0) / 8.0
    if p <= DAMPED_BREAKPOINT:
        return 1.0 - SQRT2 / 2.0 + p * (SQRT2 - 1.25) + np.sqrt(1.0 - p) / 2.0 * (SQRT2 - 1.0)
    return (1.0 + (3.0 - 2.0 * SQRT2) * p + 2.0 * (SQRT2 - 1.0) * p * p) / (4.0 * p)

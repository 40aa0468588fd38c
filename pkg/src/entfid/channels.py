"""Control-qubit dynamics, single-qubit Kraus channels and the filter protocol."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernel
from .errors import ZeroProbability
from .states import basis_state, bell_state, x_state

KRAUS_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Single-qubit operation rho -> sum_i K_i rho K_i^dag.

    Trace-preserving channels satisfy sum K_i^dag K_i = I; the others (such
    as a single filter branch) only need sum K_i^dag K_i <= I.
    """

    operators: tuple
    trace_preserving: bool = True

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops or any(k.shape != (2, 2) for k in ops):
            raise ValueError("Kraus operators must be a non-empty list of 2x2 matrices")
        object.__setattr__(self, "operators", ops)
        gram = self.completeness()
        if self.trace_preserving:
            if np.max(np.abs(gram - kernel.I2)) > KRAUS_TOL:
                raise ValueError("sum K^dag K != I for a trace-preserving channel")
        elif np.linalg.eigvalsh(gram)[-1] > 1.0 + KRAUS_TOL:
            raise ValueError("sum K^dag K exceeds the identity")

    def completeness(self):
        return sum(k.conj().T @ k for k in self.operators)


def local_operator(op, target):
    """Embed a 2x2 operator on subsystem ``"A"`` or ``"B"``."""
    if target == "A":
        return kernel.kron(op, kernel.I2)
    if target == "B":
        return kernel.kron(kernel.I2, op)
    raise ValueError(f"target must be 'A' or 'B', got {target!r}")


def control_hamiltonian(lam, basis: Optional[np.ndarray] = None):
    """(lam/2) sigma_z^A (x) I^B (x) (|alpha><alpha| - |beta><beta|).

    ``basis`` holds |alpha>, |beta> as columns of a 2x2 unitary; the
    default is the computational basis of the control qubit C, for which H
    is diagonal.
    """
    if basis is None:
        basis = kernel.I2
    basis = np.asarray(basis, dtype=complex)
    alpha, beta = basis[:, 0], basis[:, 1]
    z_c = np.outer(alpha, alpha.conj()) - np.outer(beta, beta.conj())
    return 0.5 * lam * kernel.kron(kernel.kron(kernel.SIGMA_Z, kernel.I2), z_c)


def evolve_with_control(lam, t, basis=None):
    """Reduced AB state after evolving |psi-><psi-| (x) I/2 under the control Hamiltonian."""
    h = control_hamiltonian(lam, basis)
    w = kernel.kron(bell_state("psi-"), 0.5 * kernel.I2)
    if basis is None:
        # diagonal H: U is a vector of phases
        phases = np.exp(-1j * np.diag(h).real * t)
        evolved = phases[:, None] * w * phases.conj()[None, :]
    else:
        energies, vecs = kernel.hermitian_eigensystem(h)
        u = (vecs * np.exp(-1j * energies * t)) @ vecs.conj().T
        evolved = u @ w @ u.conj().T
    return kernel.partial_trace(evolved, "C")


def amplitude_damping(p):
    """K0 = diag(1, sqrt(1-p)), K1 = sqrt(p) |0><1|."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"damping parameter must lie in [0, 1], got {p!r}")
    k0 = np.diag([1.0, np.sqrt(1.0 - p)])
    k1 = np.sqrt(p) * np.array([[0.0, 1.0], [0.0, 0.0]])
    return KrausChannel((k0, k1))


def apply_channel(rho, ch: KrausChannel, target="B"):
    """Apply ``ch`` to one qubit; return the normalized state and its probability.

    The probability is the trace before normalization, i.e. 1 for a
    trace-preserving channel and the success probability for a filter.
    """
    out = np.zeros((4, 4), dtype=complex)
    for k in ch.operators:
        big = local_operator(k, target)
        out += big @ rho @ big.conj().T
    prob = float(np.trace(out).real)
    if prob < 1e-14:
        raise ZeroProbability(f"operation succeeds with probability {prob:.3e}")
    return out / prob, prob


def filter_coefficient(F):
    """Weight F / (2(1-F)) that the success branch puts on |1>_B."""
    return F / (2.0 * (1.0 - F))


def verstraete_filter(F):
    """The two branches (success, failure) of the optimal local filter on B.

    For ``F >= 2/3`` the filter degenerates to the identity (success with
    certainty), and the failure branch is the zero operator.
    """
    if not 0.0 <= F < 1.0:
        raise ValueError(f"F must lie in [0, 1), got {F!r}")
    if F >= 2.0 / 3.0:
        return KrausChannel((kernel.I2,), trace_preserving=False), KrausChannel(
            (np.zeros((2, 2)),), trace_preserving=False
        )
    a = filter_coefficient(F)
    a1 = np.diag([1.0, a])
    a2 = np.sqrt(max(0.0, 1.0 - a * a)) * np.array([[0.0, 1.0], [0.0, 0.0]])
    return KrausChannel((a1,), trace_preserving=False), KrausChannel((a2,), trace_preserving=False)


@dataclass(frozen=True)
class FilterProtocolResult:
    """Outcome of the filter-and-reset protocol on the X-state family.

    ``rho1`` / ``rho2`` are the normalized post-filter states of the success
    and failure branches; either is ``None`` when its branch has zero
    probability. ``rho_final`` mixes the unnormalized success branch with
    the reset failure branch |00><00|.
    """

    p1: float
    p2: float
    rho1: Optional[np.ndarray]
    rho2: Optional[np.ndarray]
    rho_final: np.ndarray


def success_probability(F):
    return F * (3 * F**2 - 6 * F + 4) / (8 * (1 - F) ** 2)


def failure_probability(F):
    return (2 - F) * (3 * F**2 - 8 * F + 4) / (8 * (F - 1) ** 2)


def _branch(rho, op: KrausChannel):
    big = local_operator(op.operators[0], "B")
    out = big @ rho @ big.conj().T
    return out, float(np.trace(out).real)


def run_filter_protocol(F) -> FilterProtocolResult:
    """Filter ``x_state(F)`` on B; on failure reset A to |0> (B is already |0>)."""
    if not 0.0 <= F <= 1.0:
        raise ValueError(f"F must lie in [0, 1], got {F!r}")
    rho = x_state(F)
    if F > 2.0 / 3.0:
        return FilterProtocolResult(1.0, 0.0, rho, None, rho)
    a1, a2 = verstraete_filter(F)
    succ, p1 = _branch(rho, a1)
    fail, p2 = _branch(rho, a2)
    rho1 = succ / p1 if p1 > 1e-14 else None
    rho2 = fail / p2 if p2 > 1e-14 else None
    if rho2 is not None:
        # sigma_z measurement on A with a flip on outcome |1>; the result is |00><00|
        rho0, _ = apply_channel(rho2, amplitude_damping(1.0), target="A")
    else:
        rho0 = basis_state("00")
    rho_final = succ + (1.0 - p1) * rho0
    return FilterProtocolResult(p1, p2, rho1, rho2, rho_final)

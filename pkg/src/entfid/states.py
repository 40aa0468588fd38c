"""Two-qubit state families, Bloch-Fano conversion and the state JSON format.

A density matrix is a 4x4 complex ``numpy.ndarray``; :func:`validate_state`
checks the invariants (Hermitian, unit trace, eigenvalues >= -1e-10).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernel
from .errors import InvalidState, NotAState

SQRT2 = np.sqrt(2.0)

STATE_TOL = 1e-10

_KET = {
    "psi-": np.array([0, 1, -1, 0]) / SQRT2,
    "psi+": np.array([0, 1, 1, 0]) / SQRT2,
    "phi-": np.array([1, 0, 0, -1]) / SQRT2,
    "phi+": np.array([1, 0, 0, 1]) / SQRT2,
}


def validate_state(rho, tol=STATE_TOL):
    """Return ``rho`` as a complex array, or raise :class:`InvalidState`."""
    try:
        rho = np.asarray(rho, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidState(f"not a numeric matrix: {exc}") from None
    if rho.shape != (4, 4):
        raise InvalidState(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidState("matrix has non-finite entries")
    if kernel.hermitian_defect(rho) > tol:
        raise InvalidState(f"not Hermitian (defect {kernel.hermitian_defect(rho):.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace is {tr!r}, not 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol:
        raise InvalidState(f"negative eigenvalue {lam_min:.3e}")
    return rho


def projector(ket):
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def bell_state(which):
    """Projector onto a Bell state: ``"psi-"``, ``"psi+"``, ``"phi-"`` or ``"phi+"``."""
    try:
        return projector(_KET[which])
    except KeyError:
        raise ValueError(f"unknown Bell state {which!r}; use one of {sorted(_KET)}") from None


def bell_ket(which):
    return _KET[which].astype(complex)


def basis_state(label):
    """Projector onto a computational basis state such as ``"01"``."""
    ket = np.zeros(4, dtype=complex)
    ket[int(label, 2)] = 1.0
    return projector(ket)


@dataclass(frozen=True)
class BlochForm:
    """Local Bloch vectors ``r`` (A), ``s`` (B) and correlation matrix ``T``."""

    r: np.ndarray
    s: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        for name, shape in (("r", (3,)), ("s", (3,)), ("T", (3, 3))):
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {value.shape}")
            object.__setattr__(self, name, value)


def bloch_decompose(rho) -> BlochForm:
    """Pauli expansion coefficients of a valid state."""
    rho = validate_state(rho)
    P = kernel.PAULIS
    r = [np.trace(rho @ kernel.kron(p, kernel.I2)).real for p in P]
    s = [np.trace(rho @ kernel.kron(kernel.I2, p)).real for p in P]
    T = [[np.trace(rho @ kernel.kron(pn, pm)).real for pm in P] for pn in P]
    return BlochForm(np.array(r), np.array(s), np.array(T))


def bloch_matrix(b: BlochForm):
    """Assemble the operator for ``b`` without checking positivity."""
    P = kernel.PAULIS
    m = kernel.I4.copy()
    for n in range(3):
        m += b.r[n] * kernel.kron(P[n], kernel.I2)
        m += b.s[n] * kernel.kron(kernel.I2, P[n])
        for k in range(3):
            m += b.T[n, k] * kernel.kron(P[n], P[k])
    return m / 4.0


def bloch_compose(b: BlochForm):
    """Density matrix for a Bloch form; raises :class:`NotAState` if not PSD."""
    rho = bloch_matrix(b)
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -kernel.NEGATIVE_TOL:
        raise NotAState(f"Bloch form gives eigenvalue {lam_min:.6g}")
    return rho


def evolved_state(phase):
    """cos^2(phase/2) |psi-><psi-| + sin^2(phase/2) |psi+><psi+|, phase = lambda*t."""
    c2 = np.cos(phase / 2.0) ** 2
    s2 = np.sin(phase / 2.0) ** 2
    return c2 * bell_state("psi-") + s2 * bell_state("psi+")


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def damped_state(p):
    """State obtained by amplitude damping (strength ``p``) on qubit B.

    Written out entrywise; at ``p = 0`` its only non-zero Bloch parameters
    are r_z = 2(1 - sqrt2), T_xx = T_yy = 1 - sqrt2 and T_zz = 2 sqrt2 - 3.
    """
    _check_unit_interval("p", p)
    a = 1.5 - SQRT2
    coh = np.sqrt(1.0 - p) * (0.5 - SQRT2 / 2.0)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = p * a
    rho[1, 1] = (1.0 - p) * a
    rho[1, 2] = rho[2, 1] = coh
    rho[2, 2] = 0.5 + p * (SQRT2 - 1.0)
    rho[3, 3] = (1.0 - p) * (SQRT2 - 1.0)
    return rho


def x_state(F):
    """F |phi+><phi+| + (1 - F) |01><01|."""
    _check_unit_interval("F", F)
    return F * bell_state("phi+") + (1.0 - F) * basis_state("01")


def random_state(seed):
    """Hilbert-Schmidt random state G G^dag / Tr(G G^dag), G complex Ginibre."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_local_unitary(rng):
    """Haar-random U_A (x) U_B from a ``numpy.random.Generator``."""
    from scipy.stats import unitary_group

    ua = unitary_group.rvs(2, random_state=rng)
    ub = unitary_group.rvs(2, random_state=rng)
    return kernel.kron(ua, ub)


# -- JSON ------------------------------------------------------------------


def _fmt(x):
    return format(float(x), ".17g")


def state_to_json(rho):
    """Serialize as ``{"matrix": [[{"re": .., "im": ..}, ...], ...]}``.

    Floats are written with 17 significant digits so the round trip is exact.
    """
    rho = np.asarray(rho, dtype=complex)
    rows = []
    for row in rho:
        cells = ", ".join(f'{{"re": {_fmt(z.real)}, "im": {_fmt(z.imag)}}}' for z in row)
        rows.append(f"    [{cells}]")
    return '{\n  "matrix": [\n' + ",\n".join(rows) + "\n  ]\n}\n"


def state_from_json(text):
    """Parse the state JSON format. Raises ``ValueError`` on malformed input.

    Only the structure is checked here; call :func:`validate_state` for the
    physical invariants.
    """
    data = json.loads(text)
    if not isinstance(data, dict) or "matrix" not in data:
        raise ValueError('missing top-level "matrix" key')
    rows = data["matrix"]
    if not isinstance(rows, list) or len(rows) != 4:
        raise ValueError('"matrix" must have 4 rows')
    rho = np.zeros((4, 4), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise ValueError(f"row {i} must have 4 entries")
        for j, cell in enumerate(row):
            try:
                rho[i, j] = complex(float(cell["re"]), float(cell["im"]))
            except (TypeError, KeyError, ValueError):
                raise ValueError(f'entry ({i}, {j}) must be {{"re": number, "im": number}}') from None
    return rho


def write_state(path, rho):
    Path(path).write_text(state_to_json(rho), encoding="utf-8")


def read_state(path):
    return state_from_json(Path(path).read_text(encoding="utf-8"))

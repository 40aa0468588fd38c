import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entfid import kernel
from entfid.errors import InvalidState, NotAState
from entfid.states import (
    BlochForm,
    bell_state,
    bloch_compose,
    bloch_decompose,
    damped_state,
    evolved_state,
    random_state,
    state_from_json,
    state_to_json,
    validate_state,
    x_state,
)

S2 = np.sqrt(2)


def test_bell_state_entries():
    m = bell_state("psi-")
    assert m[1, 1] == pytest.approx(0.5) and m[2, 2] == pytest.approx(0.5)
    assert m[1, 2] == pytest.approx(-0.5) and m[2, 1] == pytest.approx(-0.5)
    m = bell_state("phi+")
    for i, j in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        assert m[i, j] == pytest.approx(0.5)
    for name in ("psi-", "psi+", "phi-", "phi+"):
        rho = bell_state(name)
        assert np.trace(rho @ rho).real == pytest.approx(1.0, abs=1e-15)
        assert np.linalg.matrix_rank(rho) == 1
    with pytest.raises(ValueError):
        bell_state("ghz")


def test_decompose_singlet():
    b = bloch_decompose(bell_state("psi-"))
    assert np.allclose(b.r, 0) and np.allclose(b.s, 0)
    assert np.allclose(b.T, -np.eye(3), atol=1e-15)


def test_decompose_damped_at_zero():
    b = bloch_decompose(damped_state(0.0))
    assert np.allclose(b.r, [0, 0, 2 * (1 - S2)], atol=1e-15)
    assert np.allclose(b.s, 0, atol=1e-15)
    assert np.allclose(b.T, np.diag([1 - S2, 1 - S2, 2 * S2 - 3]), atol=1e-15)


@pytest.mark.parametrize("phase", np.linspace(0, 2 * np.pi, 13))
def test_decompose_evolved(phase):
    c = 2 * np.cos(phase / 2) ** 2 - 1
    b = bloch_decompose(evolved_state(phase))
    # the psi-/psi+ coherence gives T_xx = T_yy = -c; magnitudes and det agree with diag(c, c, -1)
    assert np.allclose(b.T, np.diag([-c, -c, -1]), atol=1e-14)
    assert np.allclose(np.abs(np.diag(b.T)), [abs(c), abs(c), 1], atol=1e-14)
    assert np.linalg.det(b.T) == pytest.approx(-(c**2), abs=1e-14)
    assert np.allclose(b.r, 0) and np.allclose(b.s, 0)


def test_compose_examples():
    zero = np.zeros(3)
    assert np.allclose(bloch_compose(BlochForm(zero, zero, np.zeros((3, 3)))), np.eye(4) / 4)
    assert np.allclose(bloch_compose(BlochForm(zero, zero, -np.eye(3))), bell_state("psi-"))
    with pytest.raises(NotAState):
        bloch_compose(BlochForm(zero, zero, np.eye(3)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bloch_round_trips(seed):
    rho = random_state(seed)
    b = bloch_decompose(rho)
    assert np.max(np.abs(bloch_compose(b) - rho)) <= 1e-12
    b2 = bloch_decompose(bloch_compose(b))
    assert np.max(np.abs(b2.T - b.T)) <= 1e-12
    assert np.max(np.abs(b2.r - b.r)) <= 1e-12 and np.max(np.abs(b2.s - b.s)) <= 1e-12
    assert np.linalg.norm(b.r) <= 1 + 1e-9 and np.linalg.norm(b.s) <= 1 + 1e-9
    assert np.max(np.abs(b.T)) <= 1 + 1e-9


def test_evolved_examples():
    assert np.allclose(evolved_state(0.0), bell_state("psi-"))
    assert np.allclose(evolved_state(np.pi), bell_state("psi+"))
    half = np.zeros((4, 4))
    half[1, 1] = half[2, 2] = 0.5
    assert np.max(np.abs(evolved_state(np.pi / 2) - half)) <= 1e-15


@pytest.mark.parametrize("phase", np.linspace(-7, 7, 29))
def test_evolved_period_and_parity(phase):
    assert np.max(np.abs(evolved_state(phase + 2 * np.pi) - evolved_state(phase))) <= 1e-12
    assert np.max(np.abs(evolved_state(-phase) - evolved_state(phase))) <= 1e-12


def test_damped_endpoints():
    rho = damped_state(0.0)
    assert np.allclose(np.diag(rho).real, [0, 1.5 - S2, 0.5, S2 - 1], atol=1e-15)
    assert rho[1, 2] == pytest.approx((1 - S2) / 2)
    assert np.allclose(damped_state(1.0), np.diag([1.5 - S2, 0, S2 - 0.5, 0]), atol=1e-15)
    with pytest.raises(ValueError):
        damped_state(1.5)


@pytest.mark.parametrize("build", [damped_state, x_state])
def test_family_grids_are_states(build):
    for x in np.linspace(0, 1, 1001):
        rho = build(float(x))
        assert abs(np.trace(rho).real - 1) <= 1e-12
        assert np.linalg.eigvalsh(rho)[0] >= -1e-12


def test_x_state_examples():
    assert np.allclose(x_state(1.0), bell_state("phi+"))
    ket01 = np.zeros((4, 4))
    ket01[1, 1] = 1
    assert np.allclose(x_state(0.0), ket01)
    m = x_state(0.5)
    for i, j in [(0, 0), (3, 3), (0, 3), (3, 0)]:
        assert m[i, j] == pytest.approx(0.25)
    assert m[1, 1] == pytest.approx(0.5)
    with pytest.raises(ValueError):
        x_state(-0.1)


def test_random_state_regression():
    rho = random_state(42)
    assert rho[0, 0] == pytest.approx(0.20001933054546636, abs=1e-15)
    assert rho[1, 2] == pytest.approx(0.086412955990571264 + 0.013127107645696018j, abs=1e-15)
    assert rho[3, 1] == pytest.approx(0.047005636589056168 - 0.039919964779150288j, abs=1e-15)
    assert np.array_equal(random_state(42), rho)


def test_random_states_are_valid():
    for seed in range(1000):
        rho = random_state(seed)
        validate_state(rho)
        assert np.linalg.eigvalsh(rho)[0] >= 0
        assert abs(np.trace(rho).real - 1) <= 1e-12


def test_validate_state_rejects():
    with pytest.raises(InvalidState):
        validate_state(np.eye(4))
    with pytest.raises(InvalidState):
        validate_state(np.diag([1.5, -0.5, 0, 0]))
    with pytest.raises(InvalidState):
        validate_state(np.eye(3) / 3)
    bad = np.eye(4, dtype=complex) / 4
    bad[0, 1] = 0.1
    with pytest.raises(InvalidState):
        validate_state(bad)


def test_json_round_trip_is_exact():
    rho = random_state(3)
    text = state_to_json(rho)
    data = json.loads(text)
    assert len(data["matrix"]) == 4 and set(data["matrix"][0][0]) == {"re", "im"}
    assert np.array_equal(state_from_json(text), rho)


@pytest.mark.parametrize(
    "text",
    ["not json", "{}", '{"matrix": [[1, 2]]}', '{"matrix": [[{"re": 1}]] }'],
)
def test_json_parse_errors(text):
    with pytest.raises(ValueError):
        state_from_json(text)


def test_kernel_pauli_basis_is_orthogonal():
    # Bloch decomposition relies on Tr(P_i P_j) = 4 delta_ij on the two-qubit basis
    ops = [kernel.kron(a, b) for a in (kernel.I2,) + kernel.PAULIS for b in (kernel.I2,) + kernel.PAULIS]
    gram = np.array([[np.trace(a @ b) for b in ops] for a in ops])
    assert np.allclose(gram, 4 * np.eye(16))

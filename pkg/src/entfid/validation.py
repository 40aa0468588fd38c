"""Invariant and oracle suites run by ``entfid validate``.

Each suite returns ``(ok, detail)``; :func:`run_suites` catches exceptions
so that one broken module shows up as a named failure instead of aborting
the run. Detail strings avoid timings so reports are reproducible.
"""

from __future__ import annotations

import numpy as np

from . import channels, kernel, maf, measures, states, sweeps


def _worst(values):
    return float(np.max(values)) if len(values) else 0.0


def _random_hermitian(rng, n=4):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    return q if np.linalg.det(q) > 0 else -q


# -- kernel -----------------------------------------------------------------


def kernel_eigen_reconstruction(seed):
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(200):
        m = _random_hermitian(rng)
        w, v = kernel.hermitian_eigensystem(m)
        errs.append(np.max(np.abs(m - (v * w) @ v.conj().T)))
        errs.append(np.max(np.abs(v.conj().T @ v - np.eye(4))))
    err = _worst(errs)
    return err <= 1e-10, f"max error {err:.2e}"


def kernel_partial_transpose_involution(seed):
    ok = all(
        np.array_equal(kernel.partial_transpose(kernel.partial_transpose(r, s), s), r)
        for r in (states.random_state(seed + i) for i in range(100))
        for s in "AB"
    )
    return ok, "exact involution" if ok else "mismatch"


def kernel_partial_trace_product(seed):
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(100):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        errs.append(np.max(np.abs(kernel.partial_trace(kernel.kron(a, b), "B") - a * np.trace(b))))
    err = _worst(errs)
    return err <= 1e-12, f"max error {err:.2e}"


def kernel_svd3_rotation_invariance(seed):
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(200):
        t = rng.uniform(-1, 1, (3, 3))
        s0, d0 = kernel.svd3(t)
        s1, d1 = kernel.svd3(_random_rotation(rng) @ t @ _random_rotation(rng))
        errs.append(np.max(np.abs(s0 - s1)) + (d0 != d1))
    err = _worst(errs)
    return err <= 1e-9, f"max deviation {err:.2e}"


def kernel_spectral_clip_projection(seed):
    rng = np.random.default_rng(seed)
    worst_idem, worst_lip = 0.0, -np.inf
    for _ in range(100):
        a, b = _random_hermitian(rng), _random_hermitian(rng)
        ca, cb = kernel.spectral_clip(a, 0.0, 1.0), kernel.spectral_clip(b, 0.0, 1.0)
        worst_idem = max(worst_idem, np.max(np.abs(kernel.spectral_clip(ca, 0.0, 1.0) - ca)))
        worst_lip = max(worst_lip, np.linalg.norm(ca - cb) - np.linalg.norm(a - b))
    ok = worst_idem <= 1e-12 and worst_lip <= 1e-12
    return ok, f"idempotence {worst_idem:.2e}, Lipschitz excess {worst_lip:.2e}"


# -- states -----------------------------------------------------------------


def states_bloch_round_trip(seed):
    errs = []
    for i in range(200):
        rho = states.random_state(seed + i)
        b = states.bloch_decompose(rho)
        errs.append(np.max(np.abs(states.bloch_compose(b) - rho)))
        b2 = states.bloch_decompose(states.bloch_compose(b))
        errs.append(max(np.max(np.abs(b2.r - b.r)), np.max(np.abs(b2.s - b.s)), np.max(np.abs(b2.T - b.T))))
    err = _worst(errs)
    return err <= 1e-12, f"max error {err:.2e}"


def states_evolved_symmetry(seed):
    grid = np.linspace(-2 * np.pi, 2 * np.pi, 181)
    err = _worst(
        [
            max(
                np.max(np.abs(states.evolved_state(x + 2 * np.pi) - states.evolved_state(x))),
                np.max(np.abs(states.evolved_state(-x) - states.evolved_state(x))),
            )
            for x in grid
        ]
    )
    return err <= 1e-12, f"max deviation {err:.2e}"


def _family_floor(build):
    floor, trace_err = np.inf, 0.0
    for x in np.linspace(0.0, 1.0, 1001):
        rho = build(float(x))
        floor = min(floor, np.linalg.eigvalsh(rho)[0])
        trace_err = max(trace_err, abs(np.trace(rho).real - 1.0))
    return floor, trace_err


def states_damped_psd_grid(seed):
    floor, trace_err = _family_floor(states.damped_state)
    return floor >= -1e-12 and trace_err <= 1e-12, f"min eigenvalue {floor:.2e}, trace error {trace_err:.2e}"


def states_x_state_grid(seed):
    floor, trace_err = _family_floor(states.x_state)
    return floor >= -1e-12 and trace_err <= 1e-12, f"min eigenvalue {floor:.2e}, trace error {trace_err:.2e}"


# -- channels ---------------------------------------------------------------


def channels_control_dynamics(seed):
    errs = []
    for k in range(360):
        x = 2 * np.pi * k / 360
        errs.append(np.max(np.abs(channels.evolve_with_control(1.0, x) - states.evolved_state(x))))
    err = _worst(errs)
    return err <= 1e-12, f"max deviation {err:.2e}"


def channels_damping_reconstruction(seed):
    rho0 = states.damped_state(0.0)
    errs = []
    for p in np.linspace(0.0, 1.0, 101):
        out, _ = channels.apply_channel(rho0, channels.amplitude_damping(float(p)), "B")
        errs.append(np.max(np.abs(out - states.damped_state(float(p)))))
    err = _worst(errs)
    return err <= 1e-12, f"max deviation {err:.2e}"


def channels_filter_protocol(seed):
    worst = 0.0
    for F in np.linspace(0.0, 2.0 / 3.0, 33):
        res = channels.run_filter_protocol(float(F))
        worst = max(worst, abs(res.p1 + res.p2 - 1.0))
        if res.rho2 is not None:
            worst = max(worst, measures.concurrence(res.rho2))
        excess = measures.concurrence(res.rho_final) - measures.concurrence(states.x_state(float(F)))
        worst = max(worst, excess)
    return worst <= 1e-10, f"worst violation {worst:.2e}"


def channels_trace_preservation(seed):
    errs = []
    for i in range(100):
        rho = states.random_state(seed + i)
        for p in (0.0, 0.3, 1.0):
            for target in "AB":
                _, prob = channels.apply_channel(rho, channels.amplitude_damping(p), target)
                errs.append(abs(prob - 1.0))
    err = _worst(errs)
    return err <= 1e-12, f"max trace error {err:.2e}"


# -- measures ---------------------------------------------------------------


def measures_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    errs = []
    for i in range(200):
        rho = states.random_state(seed + i)
        u = states.random_local_unitary(rng)
        rot = u @ rho @ u.conj().T
        for fn in (measures.concurrence, measures.fef, measures.negativity):
            errs.append(abs(fn(rot) - fn(rho)))
    err = _worst(errs)
    return err <= 1e-9, f"max change {err:.2e}"


def measures_fef_dominates_singlet_fraction(seed):
    worst = _worst(
        [
            measures.singlet_fraction(r) - measures.fef(r)
            for r in (states.random_state(seed + i) for i in range(1000))
        ]
    )
    return worst <= 1e-10, f"max excess {worst:.2e}"


def measures_fidelity_bounds(seed):
    failures = 0
    for i in range(1000):
        rho = states.random_state(seed + i)
        audit = measures.audit_bounds(rho, slack=1e-6)
        failures += not (audit.lower and audit.upper)
    return failures == 0, f"{failures} violations in 1000 states"


def measures_separable_failure_branch(seed):
    worst_c, out_of_range = 0.0, 0
    for F in np.linspace(0.0, 2.0 / 3.0, 33):
        rho2 = channels.run_filter_protocol(float(F)).rho2
        if rho2 is None:
            continue
        worst_c = max(worst_c, measures.concurrence(rho2))
        f = measures.fef(rho2)
        out_of_range += not (0.25 - 1e-9 <= f <= 0.5 + 1e-9)
    ok = worst_c <= 1e-10 and out_of_range == 0
    return ok, f"max concurrence {worst_c:.2e}, {out_of_range} fef values outside [1/4, 1/2]"


def measures_x_state_concurrence(seed):
    err = _worst([abs(measures.concurrence(states.x_state(F)) - F) for F in np.linspace(0, 1, 1001)])
    return err <= 1e-10, f"max error {err:.2e}"


# -- maf --------------------------------------------------------------------


def maf_x_state_oracle(seed):
    grid = np.linspace(0.0, 1.0, 67, endpoint=False)
    sols = maf.maf_sdp_batch([states.x_state(float(F)) for F in grid])
    err = _worst([abs(s.f_star - maf.maf_closed_x_state(float(F))) for s, F in zip(sols, grid)])
    ok = err <= 1e-5 and all(s.converged for s in sols)
    return ok, f"max deviation {err:.2e}"


def maf_damped_oracle(seed):
    grid = np.linspace(0.0, 1.0, 101)
    sols = maf.maf_sdp_batch([states.damped_state(float(p)) for p in grid])
    err = _worst([abs(s.f_star - maf.maf_closed_damped(float(p))) for s, p in zip(sols, grid)])
    ok = err <= 1e-5 and all(s.converged for s in sols)
    return ok, f"max deviation {err:.2e}"


def maf_random_bounds(seed):
    rhos = [states.random_state(seed + i) for i in range(500)]
    sols = maf.maf_sdp_batch(rhos)
    worst = 0.0
    for rho, s in zip(rhos, sols):
        worst = max(
            worst,
            measures.fef(rho) - s.f_star,
            s.f_star - 0.5 * (1.0 + measures.negativity(rho)),
            s.f_star - 0.5 * (1.0 + measures.concurrence(rho)),
        )
    ok = worst <= 1e-6 and all(s.converged for s in sols)
    return ok, f"worst bound violation {worst:.2e}"


def maf_determinism(seed):
    rho = states.random_state(seed)
    a, b = maf.maf_sdp(rho), maf.maf_sdp(rho)
    ok = np.array_equal(a.X, b.X) and a.iterations == b.iterations
    return ok, "identical iterates" if ok else "iterates differ"


# -- cli --------------------------------------------------------------------


def cli_csv_determinism(seed):
    spec = sweeps.SweepSpec.default("xstate", ("c", "f", "n", "maf"))
    first = sweeps.to_csv(*sweeps.sweep(spec))
    second = sweeps.to_csv(*sweeps.sweep(spec))
    return first == second, "byte-identical" if first == second else "outputs differ"


def cli_figure_columns(seed):
    worst = 0.0
    _, rows = sweeps.sweep(sweeps.SweepSpec.default("evolved", ("c", "fs", "f")))
    for x, c, fs, f in rows:
        worst = max(worst, abs(c - abs(np.cos(x))), abs(fs - np.cos(x / 2) ** 2), abs(f - 0.5 * (1 + abs(np.cos(x)))))
    _, rows = sweeps.sweep(sweeps.SweepSpec.default("xstate", ("c", "f", "n", "maf")))
    sdp_worst = 0.0
    for F, c, f, n, fstar in rows:
        f_closed = (1 - F) / 2 if F <= 1 / 3 else F
        n_closed = max(0.0, F - 1 + np.sqrt(F**2 + (F - 1) ** 2))
        worst = max(worst, abs(c - F), abs(f - f_closed), abs(n - n_closed))
        sdp_worst = max(sdp_worst, abs(fstar - maf.maf_closed_x_state(F)))
    ok = worst <= 1e-9 and sdp_worst <= 1e-5
    return ok, f"closed-form deviation {worst:.2e}, SDP deviation {sdp_worst:.2e}"


SUITES = [
    ("kernel.eigen_reconstruction", kernel_eigen_reconstruction),
    ("kernel.partial_transpose_involution", kernel_partial_transpose_involution),
    ("kernel.partial_trace_product", kernel_partial_trace_product),
    ("kernel.svd3_rotation_invariance", kernel_svd3_rotation_invariance),
    ("kernel.spectral_clip_projection", kernel_spectral_clip_projection),
    ("states.bloch_round_trip", states_bloch_round_trip),
    ("states.evolved_symmetry", states_evolved_symmetry),
    ("states.damped_psd_grid", states_damped_psd_grid),
    ("states.x_state_grid", states_x_state_grid),
    ("channels.control_dynamics", channels_control_dynamics),
    ("channels.damping_reconstruction", channels_damping_reconstruction),
    ("channels.filter_protocol", channels_filter_protocol),
    ("channels.trace_preservation", channels_trace_preservation),
    ("measures.local_unitary_invariance", measures_local_unitary_invariance),
    ("measures.fef_dominates_singlet_fraction", measures_fef_dominates_singlet_fraction),
    ("measures.fidelity_bounds", measures_fidelity_bounds),
    ("measures.separable_failure_branch", measures_separable_failure_branch),
    ("measures.x_state_concurrence", measures_x_state_concurrence),
    ("maf.x_state_oracle", maf_x_state_oracle),
    ("maf.damped_oracle", maf_damped_oracle),
    ("maf.random_bounds", maf_random_bounds),
    ("maf.determinism", maf_determinism),
    ("cli.csv_determinism", cli_csv_determinism),
    ("cli.figure_columns", cli_figure_columns),
]


def run_suites(seed=0, suites=None):
    results = []
    for name, fn in suites or SUITES:
        try:
            ok, detail = fn(seed)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results

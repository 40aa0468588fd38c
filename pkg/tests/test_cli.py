import csv
import io
import json

import numpy as np
import pytest

from entfid import cli, maf
from entfid.states import bell_state, write_state, x_state
from entfid.sweeps import SweepSpec, fef_vs_concurrence, locate_saturation, sweep

S2 = np.sqrt(2)


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sweep_evolved(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "sweep", "--family", "evolved", "--measures", "c,fs", "--out", str(out))
    assert code == 0
    rows = read_csv(out.read_text())
    assert rows[0] == ["param", "concurrence", "singlet_fraction"]
    assert len(rows) == 362
    for x, c, fs in rows[1:]:
        x, c, fs = float(x), float(c), float(fs)
        assert abs(c - abs(np.cos(x))) <= 1e-9
        assert abs(fs - np.cos(x / 2) ** 2) <= 1e-9


def test_sweep_writes_17_significant_digits(capsys):
    code, text, _ = run(capsys, "sweep", "--family", "xstate", "--points", "4", "--measures", "f")
    assert code == 0
    param, f = text.splitlines()[2].split(",")
    assert param == "0.33333333333333331"
    assert abs(float(f) - 1 / 3) <= 1e-15 and len(f.replace("0.", "", 1)) == 17
    assert "\r" not in text


def test_sweep_damped_has_interior_maximum():
    _, rows = sweep(SweepSpec.default("damped", ("c", "f")))
    f = np.array([r[2] for r in rows])
    p = np.array([r[0] for r in rows])
    k = int(np.argmax(f))
    assert abs(p[k] - 0.6023) <= 0.01
    assert np.all(np.diff(f[: k + 1]) > 0) and np.all(np.diff(f[k:]) < 0)
    c = np.array([r[1] for r in rows])
    assert np.all(np.diff(c) < 0)


def test_sweep_xstate_maf_and_bounds():
    _, rows = sweep(SweepSpec("xstate", 0.0, 0.99, 34, ("f", "maf", "nbound", "cbound")))
    for F, f, fstar, nb, cb in rows:
        assert abs(fstar - maf.maf_closed_x_state(F)) <= 1e-5
        assert fstar <= nb + 1e-6 and fstar <= cb + 1e-6
        assert f <= fstar + 1e-6


def test_sweep_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "sweep", "--family", "damped", "--measures", "c,f,n,maf", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_sweep_rejects_bad_spec(capsys):
    code, _, err = run(capsys, "sweep", "--family", "damped", "--from", "0.5", "--to", "2")
    assert code == 2 and "inside [0, 1]" in err
    with pytest.raises(ValueError):
        SweepSpec("xstate", 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        SweepSpec("xstate", 0.0, 1.0, 5, ("q",))


def test_measure_singlet(tmp_path, capsys):
    path = tmp_path / "s.json"
    write_state(path, bell_state("psi-"))
    code, out, _ = run(capsys, "measure", "--state", str(path))
    report = json.loads(out)
    assert code == 0
    for key in ("concurrence", "singlet_fraction", "fef", "negativity"):
        assert report[key] == pytest.approx(1.0, abs=1e-12)
    assert report["bounds"]["saturated"] is True


def test_measure_maximally_mixed(tmp_path, capsys):
    path = tmp_path / "m.json"
    write_state(path, np.eye(4) / 4)
    _, out, _ = run(capsys, "measure", "--state", str(path))
    report = json.loads(out)
    assert report["concurrence"] == 0 and report["negativity"] == 0
    assert report["singlet_fraction"] == pytest.approx(0.25)
    assert report["fef"] == pytest.approx(0.25)


def test_measure_with_maf(tmp_path, capsys):
    path = tmp_path / "x.json"
    write_state(path, x_state(0.5))
    code, out, _ = run(capsys, "measure", "--state", str(path), "--maf")
    report = json.loads(out)
    assert code == 0
    assert report["maf"] == pytest.approx(9 / 16, abs=1e-5)
    assert report["maf_residual"] < 1e-7 and report["maf_iterations"] > 0


def test_measure_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(capsys, "measure", "--state", str(bad))[0] == 2
    assert run(capsys, "measure", "--state", str(tmp_path / "missing.json"))[0] == 2
    unphysical = tmp_path / "u.json"
    write_state(unphysical, np.diag([1.5, -0.5, 0, 0]))
    code, _, err = run(capsys, "measure", "--state", str(unphysical))
    assert code == 3 and "negative eigenvalue" in err
    ok = tmp_path / "ok.json"
    write_state(ok, x_state(0.9))
    assert run(capsys, "measure", "--state", str(ok), "--maf", "--max-iter", "3")[0] == 4


def test_fef_vs_concurrence_command(tmp_path, capsys):
    out = tmp_path / "fig7.csv"
    assert run(capsys, "fef-vs-concurrence", "--out", str(out))[0] == 0
    rows = read_csv(out.read_text())
    assert rows[0] == ["p", "concurrence", "fef", "upper_bound", "saturated"]
    body = [[float(v) for v in r[:4]] + [r[4]] for r in rows[1:]]
    assert body[0][0] == 0.0
    assert body[0][1] == pytest.approx(S2 - 1, abs=1e-12)
    assert body[0][2] == pytest.approx(0.5, abs=1e-12)
    saturated = [r for r in body if r[4] == "true"]
    assert len(saturated) == 1
    assert abs(saturated[0][0] - (2 * S2 - 2)) <= 0.01
    for p, c, f, ub, _ in body:
        assert ub == pytest.approx(0.5 * (1 + c), abs=1e-15)
        assert f <= ub + 1e-9


def test_saturation_is_not_on_uniform_grid():
    _, rows = fef_vs_concurrence(101, refine=False)
    assert not any(r[4] == "true" for r in rows)
    assert locate_saturation(np.linspace(0, 0.5, 11)) is None


def test_validate_passes(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0
    assert out.strip().endswith("suites passed")
    assert "FAIL" not in out


def test_validate_report_is_reproducible(capsys):
    from entfid.validation import SUITES, run_suites

    subset = [s for s in SUITES if s[0].startswith(("kernel.", "states."))]
    assert run_suites(3, subset) == run_suites(3, subset)


def test_validate_catches_corrupted_constant(monkeypatch, capsys):
    monkeypatch.setattr(maf, "DAMPED_BREAKPOINT", 0.8)
    code, out, _ = run(capsys, "validate")
    assert code == 1
    assert "FAIL maf.damped_oracle" in out

"""Parameter sweeps over the state families, written as CSV."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import maf, measures
from .errors import NotConverged
from .states import damped_state, evolved_state, x_state

FAMILIES = {
    "evolved": (evolved_state, (0.0, 2 * np.pi), 361),
    "damped": (damped_state, (0.0, 1.0), 101),
    "xstate": (x_state, (0.0, 1.0), 101),
}

# CLI key -> CSV column
MEASURES = {
    "c": "concurrence",
    "fs": "singlet_fraction",
    "f": "fef",
    "n": "negativity",
    "maf": "maf",
    "cbound": "concurrence_bound",
    "nbound": "negativity_bound",
}

SATURATION_TOL = 1e-9


@dataclass(frozen=True)
class SweepSpec:
    family: str
    lo: float
    hi: float
    points: int
    measures: Sequence[str] = ("c", "fs", "f")

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        if not self.lo < self.hi:
            raise ValueError("sweep range needs lo < hi")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if self.family != "evolved" and (self.lo < 0.0 or self.hi > 1.0):
            raise ValueError(f"{self.family} parameter must stay inside [0, 1]")
        unknown = [m for m in self.measures if m not in MEASURES]
        if unknown:
            raise ValueError(f"unknown measures {unknown}; choose from {sorted(MEASURES)}")

    @classmethod
    def default(cls, family, measures=("c", "fs", "f")):
        _, (lo, hi), points = FAMILIES[family]
        return cls(family, lo, hi, points, tuple(measures))

    def grid(self):
        return np.linspace(self.lo, self.hi, self.points)


def fmt(x):
    return format(float(x), ".17g")


def to_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def sweep(spec: SweepSpec, cfg: maf.SolverConfig = maf.SolverConfig()):
    """Return ``(header, rows)`` for a family sweep."""
    build = FAMILIES[spec.family][0]
    grid = spec.grid()
    states = [build(float(x)) for x in grid]
    need = set(spec.measures)
    columns = {}
    if need & {"c", "cbound"}:
        columns["c"] = [measures.concurrence(r) for r in states]
    if "fs" in need:
        columns["fs"] = [measures.singlet_fraction(r) for r in states]
    if "f" in need:
        columns["f"] = [measures.fef(r) for r in states]
    if need & {"n", "nbound"}:
        columns["n"] = [measures.negativity(r) for r in states]
    if "maf" in need:
        sols = maf.maf_sdp_batch(states, cfg)
        bad = [float(x) for x, s in zip(grid, sols) if not s.converged]
        if bad:
            raise NotConverged(f"MAF solver did not converge at {spec.family} parameter(s) {bad}")
        columns["maf"] = [s.f_star for s in sols]
    if "cbound" in need:
        columns["cbound"] = [0.5 * (1.0 + c) for c in columns["c"]]
    if "nbound" in need:
        columns["nbound"] = [0.5 * (1.0 + n) for n in columns["n"]]
    header = ["param"] + [MEASURES[m] for m in spec.measures]
    rows = [[x] + [columns[m][i] for m in spec.measures] for i, x in enumerate(grid)]
    return header, rows


def _saturation_gap(p):
    rho = damped_state(p)
    return 0.5 * (1.0 + measures.concurrence(rho)) - measures.fef(rho)


def locate_saturation(grid):
    """Refine the grid point where f comes closest to (1+C)/2.

    Returns the refined parameter, or ``None`` if the bound is not reached
    there (the gap is tangent to zero, so a plain grid almost never hits it).
    """
    gaps = np.array([_saturation_gap(float(p)) for p in grid])
    i = int(np.argmin(gaps))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(_saturation_gap, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    if res.fun > SATURATION_TOL:
        return None
    return float(res.x)


def fef_vs_concurrence(points=101, refine=True):
    """Parametric (C(p), f(p)) data for the damped family with the saturation marker.

    With ``refine`` the point where f = (1+C)/2 is located numerically and
    inserted into the uniform grid.
    """
    if points < 2:
        raise ValueError("need at least 2 points")
    grid = np.linspace(0.0, 1.0, points)
    if refine:
        p_sat = locate_saturation(grid)
        if p_sat is not None and np.min(np.abs(grid - p_sat)) > 1e-12:
            grid = np.sort(np.append(grid, p_sat))
    header = ["p", "concurrence", "fef", "upper_bound", "saturated"]
    rows = []
    for p in grid:
        rho = damped_state(float(p))
        c = measures.concurrence(rho)
        f = measures.fef(rho)
        bound = 0.5 * (1.0 + c)
        rows.append([p, c, f, bound, "true" if abs(f - bound) <= SATURATION_TOL else "false"])
    return header, rows

"""Parameter scans: populations vs detuning, peak emission vs the third
Rabi frequency, and the canonical figure bundles.

Scan points are independent work items evaluated on a thread pool; the
FLR4_THREADS environment variable caps the worker count (0 or unset =
one worker per CPU).  Results are aggregated in axis order, so outputs
are deterministic regardless of scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularLiouvillian, UnknownPoint
from .model import SystemParams, build_liouvillian, populations
from .spectrum import (POLE_GUARD, SpectrumSeries, default_nu_grid,
                       spectrum_by_method)
from .steadystate import steady_state

#: canonical driving points (Rabi triples) of the reference figures
DRIVING_POINTS = {
    "fig2a": (7.0, 4.0, 1.0),
    "fig2b": (7.0, 4.0, 50.0),
}

DEFAULT_DELTA1_SPAN = 20.0
DEFAULT_DELTA1_POINTS = 801
DEFAULT_OMEGA3_RANGE = (0.25, 50.0)
DEFAULT_OMEGA3_POINTS = 100


@dataclass(frozen=True)
class SweepTable:
    """Columnar scan result; all columns share the axis length."""

    axis_name: str
    axis_values: np.ndarray
    columns: dict[str, np.ndarray]
    skipped: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column_names(self) -> list[str]:
        return list(self.columns)


def _n_workers(n_items: int) -> int:
    raw = os.environ.get("FLR4_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_items))


def _map_ordered(fn, items):
    n = _n_workers(len(items))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def default_delta1_grid() -> np.ndarray:
    return np.linspace(-DEFAULT_DELTA1_SPAN, DEFAULT_DELTA1_SPAN,
                       DEFAULT_DELTA1_POINTS)


def default_omega3_grid(log: bool = True,
                        n: int = DEFAULT_OMEGA3_POINTS) -> np.ndarray:
    lo, hi = DEFAULT_OMEGA3_RANGE
    if log:
        return np.logspace(np.log10(lo), np.log10(hi), n)
    return np.linspace(lo, hi, n)


def populations_vs_detuning(p: SystemParams, delta1_grid=None) -> SweepTable:
    """Steady-state populations of levels 2-4 as the first detuning scans.

    Singular points are dropped from the table (listed in ``skipped``)
    rather than aborting the sweep.
    """
    grid = default_delta1_grid() if delta1_grid is None \
        else np.asarray(delta1_grid, dtype=float)

    def solve_one(d1):
        try:
            psi = steady_state(build_liouvillian(p.with_delta1(d1)))
        except SingularLiouvillian:
            return None
        return populations(psi)

    results = _map_ordered(solve_one, list(grid))
    kept = [(d1, pops) for d1, pops in zip(grid, results) if pops is not None]
    skipped = [float(d1) for d1, pops in zip(grid, results) if pops is None]
    axis = np.array([d1 for d1, _ in kept])
    pops = np.array([row for _, row in kept]).reshape(-1, 4)
    return SweepTable(
        axis_name="delta1",
        axis_values=axis,
        columns={"rho22": pops[:, 1], "rho33": pops[:, 2], "rho44": pops[:, 3]},
        skipped=skipped,
        meta={"params": p.to_dict()})


def _peak_with_tiebreak(nu: np.ndarray, s: np.ndarray):
    """Max of s and its frequency; exact ties resolve to the smallest
    |nu| (then to the more negative nu)."""
    peak = s.max()
    ties = np.nonzero(s == peak)[0]
    order = np.lexsort((nu[ties], np.abs(nu[ties])))
    return float(peak), float(nu[ties[order[0]]])


def peak_vs_omega3(p: SystemParams, omega3_grid=None, nu_grid=None,
                   method: str = "eq10") -> SweepTable:
    """Peak spectral intensity of each emission line versus the third
    Rabi frequency (first and second held at p.omega[:2]).

    One frequency grid is used for the whole sweep (default: the wide-span
    grid sized for the largest omega3 requested).  Per line the table
    carries the grid maximum, its frequency, and the value at the
    线-center-adjacent grid point.
    """
    o3s = default_omega3_grid() if omega3_grid is None \
        else np.asarray(omega3_grid, dtype=float)
    if nu_grid is None:
        nu_grid = default_nu_grid(float(o3s.max()))
    else:
        nu_grid = np.asarray(nu_grid, dtype=float)
    center_idx = int(np.lexsort((nu_grid, np.abs(nu_grid)))[0])

    def solve_one(o3):
        try:
            series = spectrum_by_method(p.with_omega3(o3), nu_grid, method)
        except SingularLiouvillian:
            return None
        out = np.empty(9)
        for i in range(3):
            out[i], out[3 + i] = _peak_with_tiebreak(nu_grid, series.s[:, i])
            out[6 + i] = series.s[center_idx, i]
        return out

    results = _map_ordered(solve_one, list(o3s))
    kept = [(o3, row) for o3, row in zip(o3s, results) if row is not None]
    skipped = [float(o3) for o3, row in zip(o3s, results) if row is None]
    axis = np.array([o3 for o3, _ in kept])
    rows = np.array([row for _, row in kept]).reshape(-1, 9)
    columns = {}
    for i in range(3):
        columns[f"peak_S{i + 1}"] = rows[:, i]
    for i in range(3):
        columns[f"argpeak_nu_S{i + 1}"] = rows[:, 3 + i]
    for i in range(3):
        columns[f"center_S{i + 1}"] = rows[:, 6 + i]
    return SweepTable(
        axis_name="omega3",
        axis_values=axis,
        columns=columns,
        skipped=skipped,
        meta={"params": p.to_dict(), "method": method,
              "nu_grid": {"min": float(nu_grid.min()),
                          "max": float(nu_grid.max()),
                          "points": int(nu_grid.size)},
              "center_nu": float(nu_grid[center_idx])})


def point_params(point: str) -> SystemParams:
    """Reference parameters of a named driving point."""
    if point not in DRIVING_POINTS:
        raise UnknownPoint(
            f"unknown driving point {point!r}; expected one of "
            f"{sorted(DRIVING_POINTS)}")
    return SystemParams(omega=DRIVING_POINTS[point])


def figure_bundle(point: str, method: str = "eq10") -> dict:
    """Spectrum series plus companion population table for a named
    driving point, with full reproduction metadata."""
    p = point_params(point)
    spectrum = spectrum_by_method(p, None, method)
    pops = populations_vs_detuning(p)
    return {
        "point": point,
        "params": p,
        "spectrum": spectrum,
        "populations": pops,
        "meta": {
            "method": spectrum.method,
            "nu_grid": {"min": float(spectrum.nu.min()),
                        "max": float(spectrum.nu.max()),
                        "points": int(spectrum.nu.size)},
            "delta1_grid": {"min": -DEFAULT_DELTA1_SPAN,
                            "max": DEFAULT_DELTA1_SPAN,
                            "points": DEFAULT_DELTA1_POINTS},
        },
    }

"""Independent time-domain route to the spectrum: two-time dipole
correlations via the regression theorem, plus finite-horizon transform.

The regression argument: every equal-time expectation grows into a
two-time correlation obeying the same affine system in the time delay,
with the drive constant scaled by the steady-state expectation of the
fixed lowering operator.  This module never touches the resolvent, so it
serves as the dual-path oracle for the spectrum module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import HorizonTooShort, StepSizeTooLarge
from .model import (Liouvillian, NSTATE, SystemParams, build_liouvillian,
                    density_matrix)
from .spectrum import SpectrumSeries, coherent_weights, default_nu_grid
from .steadystate import DEFAULT_DT, rk4_step_operator, steady_state

DEFAULT_TAU_MAX = 50.0
ASYMPTOTE_TOL = 1e-6

#: (upper, lower) level pair of the flip operator |upper><lower| whose
#: expectation is the corresponding psi component
FLIP_OPS = ((2, 1), (3, 2), (4, 3), (3, 1), (4, 1), (4, 2),
            (2, 2), (3, 3), (4, 4),
            (1, 2), (2, 3), (3, 4), (1, 3), (1, 4), (2, 4))


@dataclass(frozen=True)
class CorrelationSeries:
    """Two-time correlation <raise_i(t+tau) lower_i(t)> at steady state."""

    tau: np.ndarray
    g: np.ndarray
    asymptote: complex
    transition: int
    mode: str


def default_tau_grid(nu_max: float, tau_max: float = DEFAULT_TAU_MAX) -> np.ndarray:
    """Uniform delay grid fine enough for trapezoid transforms up to nu_max."""
    step = min(1e-2, np.pi / (10.0 * max(nu_max, 1e-12)))
    n = int(np.ceil(tau_max / step))
    return np.linspace(0.0, tau_max, n + 1)


def _initial_condition(psi_inf: np.ndarray, transition: int,
                       mode: str) -> np.ndarray:
    u0 = np.zeros(NSTATE, dtype=complex)
    if mode == "truncated":
        # only the component launched by the upper-level population
        u0[transition - 1] = psi_inf[transition + 5]
        return u0
    if mode != "full":
        raise ValueError(f"unknown correlation mode {mode!r}")
    # product rule |a><b| |i><i+1| = delta(b, i) |a><i+1| maps every
    # tracked operator onto a steady-state matrix element
    rho = density_matrix(psi_inf)
    for k, (a, b) in enumerate(FLIP_OPS):
        if b == transition:
            u0[k] = rho[transition, a - 1]
    return u0


def correlation(p: SystemParams, transition: int, tau_grid=None,
                mode: str = "truncated", dt: float = DEFAULT_DT,
                nu_max: float = 25.0) -> CorrelationSeries:
    """Integrate the regression system for one emission line.

    The delay grid defaults to default_tau_grid(nu_max).  Each grid
    interval is covered by equal fourth-order Runge-Kutta substeps no
    longer than dt.
    """
    if transition not in (1, 2, 3):
        raise ValueError("transition must be 1, 2 or 3")
    L = build_liouvillian(p)
    psi_inf = steady_state(L)
    if tau_grid is None:
        tau_grid = default_tau_grid(nu_max)
    else:
        tau_grid = np.asarray(tau_grid, dtype=float)
    if tau_grid[0] != 0.0 or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must start at 0 and increase strictly")

    lower_ss = np.conj(psi_inf[transition - 1])
    driven = Liouvillian(m=L.m, c=L.c * lower_ss, params=p)
    u0 = _initial_condition(psi_inf, transition, mode)
    u = _integrate_on_grid(driven, u0, tau_grid, dt)

    asymptote = psi_inf[transition - 1] * lower_ss
    return CorrelationSeries(tau=tau_grid, g=u[:, transition - 1],
                             asymptote=asymptote, transition=transition,
                             mode=mode)


def _integrate_on_grid(L: Liouvillian, u0: np.ndarray, tau_grid: np.ndarray,
                       dt: float) -> np.ndarray:
    """States of the affine system at every tau grid point."""
    diffs = np.diff(tau_grid)
    if diffs.size == 0:
        return u0[None, :].copy()
    h = diffs[0]
    if np.allclose(diffs, h, rtol=1e-10, atol=1e-14):
        # uniform grid: one kernel call sampling every n_sub-th substep
        n_sub = max(1, int(np.ceil(h / dt - 1e-12)))
        rstep, bstep = rk4_step_operator(L, h / n_sub)
        samples, steps, n_filled, diverged = backend.rk4_affine(
            np.ascontiguousarray(rstep), np.ascontiguousarray(bstep),
            np.ascontiguousarray(u0), n_sub * diffs.size, n_sub)
        if diverged:
            raise StepSizeTooLarge("correlation integration diverged")
        return samples[:n_filled]

    # non-uniform grid: step interval by interval, caching propagators
    out = np.empty((tau_grid.size, NSTATE), dtype=complex)
    out[0] = u0
    u = u0.copy()
    ops = {}
    for j, width in enumerate(diffs):
        n_sub = max(1, int(np.ceil(width / dt - 1e-12)))
        key = (round(float(width), 15), n_sub)
        if key not in ops:
            ops[key] = rk4_step_operator(L, width / n_sub)
        rstep, bstep = ops[key]
        for _ in range(n_sub):
            u = rstep @ u + bstep
        if np.abs(u).max() > 10.0:
            raise StepSizeTooLarge("correlation integration diverged")
        out[j + 1] = u
    return out


def transform_spectrum(series: CorrelationSeries, nu_grid,
                       mu: float = 1.0) -> SpectrumSeries:
    """Finite-horizon transform of a correlation into one spectrum column.

    S(nu) = mu^2 Re Int_0^tau_max e^{-i nu tau} (g(tau) - asymptote) dtau
    by trapezoid quadrature.  The series must have reached its asymptote
    (|g(end) - asymptote| <= 1e-6, else HorizonTooShort) and its grid
    spacing must satisfy step <= min(1e-2, pi / (10 max|nu|)).
    """
    nu_grid = np.asarray(nu_grid, dtype=float)
    gap = abs(series.g[-1] - series.asymptote)
    if gap > ASYMPTOTE_TOL:
        raise HorizonTooShort(
            f"|g(tau_max) - asymptote| = {gap:.3e} > {ASYMPTOTE_TOL}; "
            "extend the tau grid")
    max_step = float(np.diff(series.tau).max())
    bound = min(1e-2, np.pi / (10.0 * max(np.abs(nu_grid).max(), 1e-12)))
    if max_step > bound * (1 + 1e-9):
        raise ValueError(
            f"tau grid step {max_step:.3e} too coarse for the requested "
            f"frequencies (bound {bound:.3e})")

    f = series.g - series.asymptote
    diffs = np.diff(series.tau)
    if np.allclose(diffs, diffs[0], rtol=1e-10, atol=1e-14):
        integral = backend.fourier_uniform(
            np.ascontiguousarray(f), float(series.tau[0]), float(diffs[0]),
            np.ascontiguousarray(nu_grid))
    else:
        integral = np.empty(nu_grid.size, dtype=complex)
        for start in range(0, nu_grid.size, 128):
            sl = slice(start, min(start + 128, nu_grid.size))
            phases = np.exp(-1j * np.outer(nu_grid[sl], series.tau))
            integral[sl] = np.trapz(phases * f, series.tau, axis=1)

    s = np.zeros((nu_grid.size, 3))
    s[:, series.transition - 1] = mu**2 * np.real(integral)
    weights = np.zeros(3)
    weights[series.transition - 1] = mu**2 * np.real(series.asymptote)
    return SpectrumSeries(nu=nu_grid, s=s, coherent_weight=weights,
                          method="timedomain")


def timedomain_spectrum(p: SystemParams, nu_grid=None,
                        mode: str = "truncated",
                        tau_max: float = DEFAULT_TAU_MAX) -> SpectrumSeries:
    """All three emission lines via correlation + transform."""
    if nu_grid is None:
        nu_grid = default_nu_grid(p.omega[2])
    else:
        nu_grid = np.asarray(nu_grid, dtype=float)
    nu_max = float(np.abs(nu_grid).max())
    tau_grid = default_tau_grid(nu_max, tau_max)

    L = build_liouvillian(p)
    psi_inf = steady_state(L)
    s = np.zeros((nu_grid.size, 3))
    for i in (1, 2, 3):
        series = correlation(p, i, tau_grid, mode=mode)
        part = transform_spectrum(series, nu_grid, mu=p.mu[i - 1])
        s[:, i - 1] = part.s[:, i - 1]
    return SpectrumSeries(nu=nu_grid, s=s,
                          coherent_weight=coherent_weights(psi_inf, p.mu),
                          method="timedomain")

"""Steady states, time-domain propagation and stability spectra of the
affine generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import SingularLiouvillian, StepSizeTooLarge
from .model import NSTATE, Liouvillian

DEFAULT_DT = 1e-3
DEFAULT_SAMPLE_EVERY = 100
STEADY_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of d psi/dt = m psi + c."""

    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def steady_state(L: Liouvillian) -> np.ndarray:
    """Long-time state psi(inf) = -m^-1 c by direct dense solve."""
    try:
        psi = np.linalg.solve(L.m, -L.c)
    except np.linalg.LinAlgError as exc:
        raise SingularLiouvillian(f"generator is rank deficient: {exc}") from exc
    residual = np.abs(L.m @ psi + L.c).max()
    if not np.isfinite(residual) or residual > STEADY_RESIDUAL_TOL:
        raise SingularLiouvillian(
            f"steady-state residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL}")
    return psi


def rk4_step_operator(L: Liouvillian, dt: float):
    """One-step propagator (rstep, bstep) of classical fourth-order
    Runge-Kutta applied to the affine system.

    For a linear right-hand side the scheme collapses to the degree-4
    Taylor polynomial of the exponential, so each step is a single
    matrix-vector product plus a shift.
    """
    a = dt * L.m
    eye = np.eye(NSTATE)
    rstep = eye + a @ (eye + a @ (eye + a @ (eye + a / 4.0) / 3.0) / 2.0)
    bstep = dt * (L.c + a @ (L.c + a @ (L.c + a @ L.c / 4.0) / 3.0) / 2.0)
    return rstep, bstep


def integrate(L: Liouvillian, psi0=None, t_end: float = 100.0,
              dt: float = DEFAULT_DT,
              sample_every: int = DEFAULT_SAMPLE_EVERY) -> Trajectory:
    """Propagate from psi0 (default: everything in the ground level) to
    t_end with fixed-step fourth-order Runge-Kutta.

    Only every ``sample_every``-th step is retained (plus the final
    state).  The step count is rounded so the grid ends exactly at t_end.
    Raises StepSizeTooLarge when a sampled state exceeds |psi| = 10.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    psi0 = np.zeros(NSTATE, dtype=complex) if psi0 is None \
        else np.asarray(psi0, dtype=complex)
    n_steps = max(1, int(round(t_end / dt)))
    dt_eff = t_end / n_steps

    rstep, bstep = rk4_step_operator(L, dt_eff)
    samples, steps, n_filled, diverged = backend.rk4_affine(
        np.ascontiguousarray(rstep, dtype=complex),
        np.ascontiguousarray(bstep, dtype=complex),
        np.ascontiguousarray(psi0, dtype=complex),
        n_steps, int(sample_every))
    if diverged:
        raise StepSizeTooLarge(
            f"|psi| exceeded 10 by step {steps[n_filled - 1]} "
            f"(dt = {dt_eff:.3e}); reduce the step size")
    return Trajectory(times=steps[:n_filled] * dt_eff,
                      states=samples[:n_filled])


def stability_eigs(L: Liouvillian) -> np.ndarray:
    """Eigenvalues of the generator, sorted by descending real part
    (descending imaginary part breaks ties)."""
    eigs = np.linalg.eigvals(L.m)
    order = np.lexsort((-eigs.imag, -eigs.real))
    return eigs[order]

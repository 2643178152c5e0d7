"""Per-transition incoherent fluorescence spectra from the resolvent of
the generator, plus the coherent delta-function weights.

Two closed-form evaluators are provided (see SpectrumSeries.method):

* ``eq10``           - the literal published formula, whose inhomogeneous
                       term carries a 1/(i nu) factor and is singular at
                       the line center (grids must keep |nu| >= 1e-6);
* ``qrt-consistent`` - the exact transform of the truncated regression
                       correlation with the coherent part removed, finite
                       everywhere.

Both are assembled from the same per-frequency resolvent solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ResolventSingular, SingularLiouvillian
from .model import Liouvillian, NSTATE, SystemParams, build_liouvillian
from .steadystate import steady_state

POLE_GUARD = 1e-6

#: default frequency-grid policy: narrow span for weak third-field driving,
#: wide span when the outer sidebands scale with 2*omega3 > 20
NARROW_SPAN = 25.0
NARROW_POINTS = 2001
WIDE_SPAN = 120.0
WIDE_POINTS = 4801
OMEGA3_WIDE_THRESHOLD = 10.0

TRANSITION_LABELS = ("2->1", "3->2", "4->3")


@dataclass(frozen=True)
class SpectrumSeries:
    """Real incoherent spectra of the three emission lines on a common
    frequency grid (offsets from each line center, units of gamma)."""

    nu: np.ndarray
    s: np.ndarray                 # shape (len(nu), 3)
    coherent_weight: np.ndarray   # shape (3,), mu_i^2 |psi_i(inf)|^2
    method: str

    def column(self, transition: int) -> np.ndarray:
        return self.s[:, transition - 1]


def default_nu_grid(omega3: float) -> np.ndarray:
    """Symmetric uniform grid sized to capture all sideband structure.

    Built as an odd-count linspace whose center point falls on nu = 0 and
    is then removed by the pole guard, leaving an even number of points
    placed symmetrically about the line center.
    """
    if omega3 > OMEGA3_WIDE_THRESHOLD:
        span, npts = WIDE_SPAN, WIDE_POINTS
    else:
        span, npts = NARROW_SPAN, NARROW_POINTS
    grid = np.linspace(-span, span, npts)
    return grid[np.abs(grid) >= POLE_GUARD]


def resolvent_apply(L: Liouvillian, z: complex, rhs) -> np.ndarray:
    """Solve (z I - m) x = rhs for a single complex shift.

    Raises ResolventSingular when z lies within 1e-12 of an eigenvalue of
    the generator or the solve residual exceeds 1e-10 * |rhs|.
    """
    rhs = np.asarray(rhs, dtype=complex)
    eigs = np.linalg.eigvals(L.m)
    gap = np.abs(eigs - z).min()
    if gap < 1e-12:
        raise ResolventSingular(
            f"shift {z} is within {gap:.2e} of an eigenvalue")
    a = z * np.eye(NSTATE) - L.m
    x = np.linalg.solve(a, rhs)
    scale = max(np.abs(rhs).max(), 1e-300)
    residual = np.abs(a @ x - rhs).max()
    if not np.isfinite(residual) or residual > 1e-10 * scale:
        raise ResolventSingular(
            f"solve residual {residual:.3e} at shift {z}")
    return x


def resolvent_grid_terms(L: Liouvillian, psi_inf: np.ndarray,
                         nu_grid: np.ndarray):
    """Raw per-frequency ingredients shared by both spectrum methods.

    Returns (rdiag, rpsi, minv_rc), each of shape (len(nu_grid), 3); see
    backend.resolvent_grid for the definitions.
    """
    nu_grid = np.ascontiguousarray(nu_grid, dtype=float)
    rdiag, rpsi, minv_rc, fail = backend.resolvent_grid(
        np.ascontiguousarray(L.m, dtype=complex),
        np.ascontiguousarray(L.c, dtype=complex),
        np.ascontiguousarray(psi_inf, dtype=complex),
        nu_grid)
    if fail == -2:
        raise SingularLiouvillian("generator is rank deficient")
    if fail >= 0:
        raise ResolventSingular(
            f"resolvent solve failed at nu = {nu_grid[fail]!r}")
    return rdiag, rpsi, minv_rc


def coherent_weights(psi_inf: np.ndarray, mu) -> np.ndarray:
    """Delta-function (elastic) weights mu_i^2 |psi_i(inf)|^2."""
    mu = np.asarray(mu, dtype=float)
    return mu**2 * np.abs(psi_inf[0:3]) ** 2


def _prepare(p: SystemParams, nu_grid):
    L = build_liouvillian(p)
    psi_inf = steady_state(L)
    if nu_grid is None:
        nu_grid = default_nu_grid(p.omega[2])
    else:
        nu_grid = np.asarray(nu_grid, dtype=float)
    return L, psi_inf, nu_grid


def spectrum_eq10(p: SystemParams, nu_grid=None) -> SpectrumSeries:
    """Literal published spectrum formula.

    S_i(nu) = Re[ mu_i^2 ( R_ii(i nu) psi_{i+6}  +
                           (1/(i nu)) (m^-1 R(i nu) c)_i conj(psi_i) ) ]

    The 1/(i nu) factor is singular at the line center, so the grid must
    exclude |nu| < 1e-6.
    """
    L, psi_inf, nu_grid = _prepare(p, nu_grid)
    if np.abs(nu_grid).min() < POLE_GUARD:
        raise ValueError(
            f"grid point inside the pole guard |nu| < {POLE_GUARD}")
    rdiag, rpsi, minv_rc = resolvent_grid_terms(L, psi_inf, nu_grid)
    mu2 = np.asarray(p.mu) ** 2
    upper = psi_inf[6:9]
    coh = np.conj(psi_inf[0:3])
    inv_z = 1.0 / (1j * nu_grid)
    s = np.real(mu2 * (rdiag * upper + inv_z[:, None] * minv_rc * coh))
    return SpectrumSeries(nu=nu_grid, s=s,
                          coherent_weight=coherent_weights(psi_inf, p.mu),
                          method="eq10")


def spectrum_consistent(p: SystemParams, nu_grid=None) -> SpectrumSeries:
    """Regression-theorem-consistent spectrum.

    S_i(nu) = Re[ mu_i^2 ( R_ii(i nu) psi_{i+6}  -
                           (R(i nu) psi)_i conj(psi_i) ) ]

    Exact transform of the truncated time-domain correlation with the
    coherent part removed; finite at nu = 0.
    """
    L, psi_inf, nu_grid = _prepare(p, nu_grid)
    rdiag, rpsi, minv_rc = resolvent_grid_terms(L, psi_inf, nu_grid)
    mu2 = np.asarray(p.mu) ** 2
    upper = psi_inf[6:9]
    coh = np.conj(psi_inf[0:3])
    s = np.real(mu2 * (rdiag * upper - rpsi * coh))
    return SpectrumSeries(nu=nu_grid, s=s,
                          coherent_weight=coherent_weights(psi_inf, p.mu),
                          method="qrt-consistent")


def spectrum_by_method(p: SystemParams, nu_grid=None,
                       method: str = "eq10") -> SpectrumSeries:
    """Dispatch on the method tag (eq10 / qrt-consistent / timedomain)."""
    if method == "eq10":
        return spectrum_eq10(p, nu_grid)
    if method in ("qrt", "qrt-consistent"):
        return spectrum_consistent(p, nu_grid)
    if method == "timedomain":
        from .qrt import timedomain_spectrum
        return timedomain_spectrum(p, nu_grid)
    raise ValueError(f"unknown spectrum method {method!r}")

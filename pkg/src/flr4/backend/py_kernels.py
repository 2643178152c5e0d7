"""Pure-numpy implementations of the hot kernels.

Semantics mirror the compiled extension in _kernels.pyx exactly; the
compiled module is preferred at import time when available (see
backend/__init__).  All three kernels are pure functions.
"""

import numpy as np
import scipy.linalg

NAME = "python"

_SOLVE_CHUNK = 2048
_FOURIER_CHUNK = 128


def resolvent_grid(m, c, psi, nu):
    """Per-frequency resolvent ingredients of the spectrum formulas.

    For each nu value, with A = (i nu I - m), solves A X = [e1, e2, e3,
    psi, c] and applies the precomputed factorization of m to the last
    column.  Returns (rdiag, rpsi, minv_rc, fail) where the arrays have
    shape (len(nu), 3):

        rdiag[j, i]   = resolvent diagonal entry  [(i nu_j - m)^-1]_{ii}
        rpsi[j, i]    = [(i nu_j - m)^-1 psi]_i
        minv_rc[j, i] = [m^-1 (i nu_j - m)^-1 c]_i

    fail is -1 on success, -2 if m itself is singular, else the index of
    the first nu value whose shifted system could not be solved.
    """
    m = np.asarray(m, dtype=complex)
    c = np.asarray(c, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    nu = np.asarray(nu, dtype=float)
    n = m.shape[0]
    nnu = nu.shape[0]

    rdiag = np.empty((nnu, 3), dtype=complex)
    rpsi = np.empty((nnu, 3), dtype=complex)
    minv_rc = np.empty((nnu, 3), dtype=complex)

    lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    if np.abs(np.diag(lu)).min() == 0.0:
        return rdiag, rpsi, minv_rc, -2

    rhs = np.zeros((n, 5), dtype=complex)
    rhs[0, 0] = rhs[1, 1] = rhs[2, 2] = 1.0
    rhs[:, 3] = psi
    rhs[:, 4] = c
    eye = np.eye(n, dtype=complex)
    diag_idx = np.arange(3)

    for start in range(0, nnu, _SOLVE_CHUNK):
        sl = slice(start, min(start + _SOLVE_CHUNK, nnu))
        shifts = 1j * nu[sl]
        a = shifts[:, None, None] * eye - m
        try:
            x = np.linalg.solve(a, np.broadcast_to(rhs, (a.shape[0], n, 5)))
        except np.linalg.LinAlgError:
            for j in range(a.shape[0]):
                try:
                    np.linalg.solve(a[j], rhs)
                except np.linalg.LinAlgError:
                    return rdiag, rpsi, minv_rc, start + j
            raise
        rdiag[sl] = x[:, diag_idx, diag_idx]
        rpsi[sl] = x[:, diag_idx, 3]
        rc = x[:, :, 4]
        minv_rc[sl] = scipy.linalg.lu_solve((lu, piv), rc.T,
                                            check_finite=False).T[:, :3]

    if not (np.isfinite(rdiag).all() and np.isfinite(rpsi).all()
            and np.isfinite(minv_rc).all()):
        bad = ~(np.isfinite(rdiag).all(axis=1)
                & np.isfinite(rpsi).all(axis=1)
                & np.isfinite(minv_rc).all(axis=1))
        return rdiag, rpsi, minv_rc, int(np.nonzero(bad)[0][0])
    return rdiag, rpsi, minv_rc, -1


def rk4_affine(rstep, bstep, y0, n_steps, sample_every):
    """Iterate the one-step affine map y <- rstep @ y + bstep.

    rstep/bstep are the fourth-order single-step propagator of the affine
    ODE (precomputed by the caller).  Samples are stored at step 0, every
    ``sample_every`` steps, and at the final step.  Returns (samples,
    sample_steps, n_filled, diverged); iteration stops early when a
    sampled state has max |y| > 10.
    """
    rstep = np.asarray(rstep, dtype=complex)
    bstep = np.asarray(bstep, dtype=complex)
    y = np.array(y0, dtype=complex)
    n = y.shape[0]

    n_samples = n_steps // sample_every + 1
    if n_steps % sample_every:
        n_samples += 1
    samples = np.empty((n_samples, n), dtype=complex)
    sample_steps = np.empty(n_samples, dtype=np.int64)

    samples[0] = y
    sample_steps[0] = 0
    idx = 1
    diverged = False
    if np.abs(y).max() > 10.0:
        diverged = True
        return samples, sample_steps, idx, diverged

    for step in range(1, n_steps + 1):
        y = rstep @ y + bstep
        if step % sample_every == 0 or step == n_steps:
            samples[idx] = y
            sample_steps[idx] = step
            idx += 1
            if not np.isfinite(y).all() or np.abs(y).max() > 10.0:
                diverged = True
                break
    return samples, sample_steps, idx, diverged


def fourier_uniform(f, tau0, dtau, nu):
    """Trapezoid quadrature of f(tau) e^{-i nu tau} on a uniform tau grid.

    Returns the complex integral for every nu.  Matches the compiled
    kernel's incremental-phase evaluation to roundoff.
    """
    f = np.asarray(f, dtype=complex)
    nu = np.asarray(nu, dtype=float)
    ntau = f.shape[0]
    if ntau < 2:
        return np.zeros(nu.shape[0], dtype=complex)
    w = np.full(ntau, dtau, dtype=float)
    w[0] *= 0.5
    w[-1] *= 0.5
    wf = w * f
    tau = tau0 + dtau * np.arange(ntau)

    out = np.empty(nu.shape[0], dtype=complex)
    for start in range(0, nu.shape[0], _FOURIER_CHUNK):
        sl = slice(start, min(start + _FOURIER_CHUNK, nu.shape[0]))
        phases = np.exp(-1j * np.outer(nu[sl], tau))
        out[sl] = phases @ wf
    return out

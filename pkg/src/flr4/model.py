"""Physical parameters and assembly of the affine generator for the
four-level ladder atom driven by three classical fields.

State layout (1-based semantics, stored 0-based): the 15-component complex
vector ``psi`` holds the six independent coherences, the three excited
populations and the six conjugate coherences,

    psi1..psi6  = rho12, rho23, rho34, rho13, rho14, rho24
    psi7..psi9  = rho22, rho33, rho44
    psi10..psi15 = conj(psi1..psi6)

with the ground population eliminated through rho11 = 1 - psi7 - psi8 - psi9.
The dynamics is the affine linear system  d psi/dt = m @ psi + c.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import NegativeRate, TraceLeak

NSTATE = 15

#: (lower, upper) level pair of each stored coherence, atomic levels 1..4
COHERENCE_LEVELS = ((1, 2), (2, 3), (3, 4), (1, 3), (1, 4), (2, 4))

#: density-matrix element represented by each psi component
PSI_LABELS = (
    "rho12", "rho23", "rho34", "rho13", "rho14", "rho24",
    "rho22", "rho33", "rho44",
    "rho21", "rho32", "rho43", "rho31", "rho41", "rho42",
)

#: index permutation of the conjugation involution: component k of the
#: permuted vector is component CONJ_PERM[k] of the original (swaps the
#: coherences with their conjugates, fixes the populations)
CONJ_PERM = np.array([9, 10, 11, 12, 13, 14, 6, 7, 8, 0, 1, 2, 3, 4, 5])

#: decay/branching rates of the Fig. 2-style reference configuration
REFERENCE_GAMMA_LEVEL = (6.0, 1.0, 1.0)
REFERENCE_GAMMA_BRANCH = (1.0, 1.0, 0.0)

RATE_BALANCE_TOL = 1e-12

_CONFIG_KEYS = {"omega", "delta", "gamma_level", "gamma_branch", "mu",
                "allow_open_system"}


def _triple(value, name) -> tuple[float, float, float]:
    vals = tuple(float(v) for v in value)
    if len(vals) != 3:
        raise ValueError(f"{name} must have exactly 3 entries, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs, all rates and frequencies in units of gamma = 1.

    omega        : Rabi frequencies of the 1-2, 2-3 and 3-4 couplings
    delta        : laser detunings of the three fields
    gamma_level  : total decay rates of levels 2, 3, 4
    gamma_branch : branching rates (3->2, 4->3, 4->2)
    mu           : dipole-moment magnitudes of the three transitions
    allow_open_system : skip the population-conservation check
    """

    omega: tuple[float, float, float]
    delta: tuple[float, float, float] = (0.0, 0.0, 0.0)
    gamma_level: tuple[float, float, float] = REFERENCE_GAMMA_LEVEL
    gamma_branch: tuple[float, float, float] = REFERENCE_GAMMA_BRANCH
    mu: tuple[float, float, float] = (1.0, 1.0, 1.0)
    allow_open_system: bool = False

    def __post_init__(self):
        object.__setattr__(self, "omega", _triple(self.omega, "omega"))
        object.__setattr__(self, "delta", _triple(self.delta, "delta"))
        object.__setattr__(self, "gamma_level", _triple(self.gamma_level, "gamma_level"))
        object.__setattr__(self, "gamma_branch", _triple(self.gamma_branch, "gamma_branch"))
        object.__setattr__(self, "mu", _triple(self.mu, "mu"))

    def with_omega3(self, omega3: float) -> "SystemParams":
        return replace(self, omega=(self.omega[0], self.omega[1], float(omega3)))

    def with_delta1(self, delta1: float) -> "SystemParams":
        return replace(self, delta=(float(delta1), self.delta[1], self.delta[2]))

    def to_dict(self) -> dict:
        return {
            "omega": list(self.omega),
            "delta": list(self.delta),
            "gamma_level": list(self.gamma_level),
            "gamma_branch": list(self.gamma_branch),
            "mu": list(self.mu),
            "allow_open_system": self.allow_open_system,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SystemParams":
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "omega" not in data:
            raise ValueError("config must provide 'omega' (3 Rabi frequencies)")
        kwargs = {"omega": data["omega"]}
        for key in ("delta", "gamma_level", "gamma_branch", "mu"):
            if key in data:
                kwargs[key] = data[key]
        if "allow_open_system" in data:
            kwargs["allow_open_system"] = bool(data["allow_open_system"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, path) -> "SystemParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    value: float
    ok: bool
    detail: str = ""


def validation_report(p: SystemParams) -> list[ValidationCheck]:
    """Evaluate every parameter constraint without raising."""
    checks = []
    for name, vals in (("omega", p.omega), ("gamma_level", p.gamma_level),
                       ("gamma_branch", p.gamma_branch), ("mu", p.mu)):
        for i, v in enumerate(vals):
            checks.append(ValidationCheck(
                name=f"nonnegative:{name}[{i}]", value=v, ok=v >= 0.0))
    g2, g3, g4 = p.gamma_level
    b23, b34, b24 = p.gamma_branch
    leak3 = g3 - b23
    leak4 = g4 - (b34 + b24)
    ok3 = abs(leak3) <= RATE_BALANCE_TOL or p.allow_open_system
    ok4 = abs(leak4) <= RATE_BALANCE_TOL or p.allow_open_system
    checks.append(ValidationCheck(
        name="balance:Gamma3-gamma23", value=leak3, ok=ok3,
        detail="level-3 decay must feed level 2"))
    checks.append(ValidationCheck(
        name="balance:Gamma4-gamma34-gamma24", value=leak4, ok=ok4,
        detail="level-4 decay must feed levels 3 and 2"))
    return checks


def validate_params(p: SystemParams) -> SystemParams:
    """Return ``p`` unchanged if all invariants hold.

    Raises NegativeRate for any negative rate/frequency/dipole and
    TraceLeak when the level decay rates do not match the branching rates
    (population would leak out of the four-level manifold), unless
    ``allow_open_system`` is set.
    """
    for check in validation_report(p):
        if check.ok:
            continue
        if check.name.startswith("nonnegative:"):
            raise NegativeRate(f"{check.name[12:]} = {check.value} < 0")
        raise TraceLeak(
            f"{check.name[8:]} = {check.value:+.3e} breaks population "
            "conservation (set allow_open_system to override)")
    return p


@dataclass(frozen=True)
class Liouvillian:
    """Affine generator d psi/dt = m @ psi + c for the 15-vector psi."""

    m: np.ndarray
    c: np.ndarray
    params: SystemParams = field(repr=False, compare=False, default=None)


def build_liouvillian(p: SystemParams) -> Liouvillian:
    """Assemble the 15x15 generator and its drive vector.

    Rows 1-9 implement the rotating-frame Bloch equations with rho11
    eliminated through the trace; rows 10-15 are the conjugates of rows
    1-6.  The elimination leaves a single constant +i*omega1 in the rho12
    row (and its conjugate); the sign is fixed by requiring physical
    (nonnegative) steady-state populations, see DRIVE_SIGN_NOTE.
    """
    p = validate_params(p)
    o1, o2, o3 = p.omega
    d1, d2, d3 = p.delta
    g2, g3, g4 = p.gamma_level
    b23, b34, b24 = p.gamma_branch

    m = np.zeros((NSTATE, NSTATE), dtype=complex)
    c = np.zeros(NSTATE, dtype=complex)

    # rho12
    m[0, 0] = 1j * d1 - g2 / 2
    m[0, 6] = -2j * o1
    m[0, 7] = -1j * o1
    m[0, 8] = -1j * o1
    m[0, 3] = 1j * o2
    c[0] = 1j * o1
    # rho23
    m[1, 1] = 1j * d2 - (g2 + g3) / 2
    m[1, 3] = -1j * o1
    m[1, 6] = 1j * o2
    m[1, 7] = -1j * o2
    m[1, 5] = 1j * o3
    # rho34
    m[2, 2] = 1j * d3 - (g3 + g4) / 2
    m[2, 5] = -1j * o2
    m[2, 7] = 1j * o3
    m[2, 8] = -1j * o3
    # rho13
    m[3, 3] = 1j * (d1 + d2) - g3 / 2
    m[3, 1] = -1j * o1
    m[3, 0] = 1j * o2
    m[3, 4] = 1j * o3
    # rho14
    m[4, 4] = 1j * (d1 + d2 + d3) - g4 / 2
    m[4, 5] = -1j * o1
    m[4, 3] = 1j * o3
    # rho24
    m[5, 5] = 1j * (d2 + d3) - (g2 + g4) / 2
    m[5, 4] = -1j * o1
    m[5, 2] = -1j * o2
    m[5, 1] = 1j * o3
    # rho22
    m[6, 6] = -g2
    m[6, 9] = 1j * o1
    m[6, 0] = -1j * o1
    m[6, 1] = 1j * o2
    m[6, 10] = -1j * o2
    m[6, 7] = b23
    m[6, 8] = b24
    # rho33
    m[7, 7] = -g3
    m[7, 2] = 1j * o3
    m[7, 11] = -1j * o3
    m[7, 1] = -1j * o2
    m[7, 10] = 1j * o2
    m[7, 8] = b34
    # rho44
    m[8, 8] = -g4
    m[8, 2] = -1j * o3
    m[8, 11] = 1j * o3

    # conjugate rows: m[9+k, perm(j)] = conj(m[k, j])
    for k in range(6):
        m[9 + k, CONJ_PERM] = np.conj(m[k])
        c[9 + k] = np.conj(c[k])

    return Liouvillian(m=m, c=c, params=p)


#: drive-constant convention recorded in run manifests
DRIVE_SIGN_NOTE = ("c1 = +i*omega1, obtained by eliminating rho11 via the "
                   "trace; the opposite sign yields negative steady-state "
                   "populations and is rejected")


def conjugation_vec(x: np.ndarray) -> np.ndarray:
    """Apply the involution J . conj to a 15-vector."""
    return np.conj(x)[CONJ_PERM]


def conjugation_mat(m: np.ndarray) -> np.ndarray:
    """Apply J . conj . J to a 15x15 matrix."""
    return np.conj(m[np.ix_(CONJ_PERM, CONJ_PERM)])


def conjugation_defect(L: Liouvillian) -> float:
    """Max deviation of (m, c) from the conjugation symmetry."""
    dm = np.abs(conjugation_mat(L.m) - L.m).max()
    dc = np.abs(conjugation_vec(L.c) - L.c).max()
    return max(dm, dc)


def conservation_defect(L: Liouvillian) -> float:
    """Max residual of the population-conservation identity.

    For closed-system rates, the sum of the three population rows plus the
    implied ground-level equation d rho11/dt = Gamma2 psi7 - i omega1
    (psi10 - psi1) must vanish identically (as a row vector), and the
    drive constants of rows 7-9 must be zero.
    """
    p = L.params
    o1 = p.omega[0]
    g2 = p.gamma_level[0]
    row = L.m[6] + L.m[7] + L.m[8]
    row = row.copy()
    row[6] += g2
    row[9] += -1j * o1
    row[0] += 1j * o1
    return max(np.abs(row).max(), np.abs(L.c[6:9]).max())


def hermitian_pair_defect(psi: np.ndarray) -> float:
    """Max |psi_{9+k} - conj(psi_k)| over the six coherences."""
    return float(np.abs(psi[9:15] - np.conj(psi[0:6])).max())


def populations(psi: np.ndarray) -> np.ndarray:
    """Real populations (rho11, rho22, rho33, rho44) implied by psi."""
    p234 = psi[6:9].real
    return np.concatenate(([1.0 - p234.sum()], p234))


def density_matrix(psi: np.ndarray) -> np.ndarray:
    """Full 4x4 density matrix implied by a paired state vector."""
    rho = np.zeros((4, 4), dtype=complex)
    pops = populations(psi)
    for lvl in range(4):
        rho[lvl, lvl] = pops[lvl]
    for k, (a, b) in enumerate(COHERENCE_LEVELS):
        rho[a - 1, b - 1] = psi[k]
        rho[b - 1, a - 1] = np.conj(psi[k])
    return rho


def check_state(psi: np.ndarray, pair_tol=1e-10, pop_tol=1e-10,
                coh_tol=1e-8) -> None:
    """Assert the physical-state invariants of a 15-vector.

    Raises ValueError naming the violated invariant: conjugation pairing,
    realness and [0, 1] range of the populations, and the Cauchy-Schwarz
    bound |rho_ij|^2 <= rho_ii rho_jj for each stored coherence.
    """
    psi = np.asarray(psi)
    if psi.shape != (NSTATE,):
        raise ValueError(f"state must have shape ({NSTATE},)")
    defect = hermitian_pair_defect(psi)
    if defect > pair_tol:
        raise ValueError(f"conjugation pairing broken: defect {defect:.3e}")
    if np.abs(psi[6:9].imag).max() > pop_tol:
        raise ValueError("populations have imaginary parts")
    pops = populations(psi)
    if pops.min() < -pop_tol or pops.max() > 1.0 + pop_tol:
        raise ValueError(f"populations outside [0, 1]: {pops}")
    for k, (a, b) in enumerate(COHERENCE_LEVELS):
        bound = pops[a - 1] * pops[b - 1]
        if abs(psi[k]) ** 2 > bound + coh_tol:
            raise ValueError(
                f"coherence rho{a}{b} violates |rho_ij|^2 <= rho_ii rho_jj")

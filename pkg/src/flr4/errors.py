"""Exception types raised by the simulation modules.

Each class name doubles as the machine-readable error code printed by the
CLI (``<code>: <message>`` on stderr, exit status 1).
"""


class Flr4Error(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class NegativeRate(Flr4Error):
    """A rate, Rabi frequency or dipole magnitude is negative."""


class TraceLeak(Flr4Error):
    """Level decay rates violate total-population conservation."""


class SingularLiouvillian(Flr4Error):
    """The generator matrix is rank deficient; no unique steady state."""


class StepSizeTooLarge(Flr4Error):
    """Fixed-step integration diverged (some |psi| exceeded 10)."""


class ResolventSingular(Flr4Error):
    """Resolvent evaluated at (or within 1e-12 of) an eigenvalue."""


class HorizonTooShort(Flr4Error):
    """Correlation has not reached its asymptote at the end of the grid."""


class UnknownPoint(Flr4Error):
    """Named driving point is not one of the canonical figure points."""

"""flr4: steady states and resonance-fluorescence spectra of a four-level
ladder atom driven by three classical fields (all rates in units of the
reference decay constant gamma = 1).
"""

from .backend import BACKEND
from .errors import (Flr4Error, HorizonTooShort, NegativeRate,
                     ResolventSingular, SingularLiouvillian,
                     StepSizeTooLarge, TraceLeak, UnknownPoint)
from .model import (Liouvillian, SystemParams, build_liouvillian,
                    conjugation_defect, conservation_defect, density_matrix,
                    populations, validate_params, validation_report)
from .qrt import (CorrelationSeries, correlation, default_tau_grid,
                  timedomain_spectrum, transform_spectrum)
from .spectrum import (SpectrumSeries, coherent_weights, default_nu_grid,
                       resolvent_apply, spectrum_by_method,
                       spectrum_consistent, spectrum_eq10)
from .steadystate import Trajectory, integrate, stability_eigs, steady_state

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "Flr4Error", "HorizonTooShort", "NegativeRate", "ResolventSingular",
    "SingularLiouvillian", "StepSizeTooLarge", "TraceLeak", "UnknownPoint",
    "Liouvillian", "SystemParams", "build_liouvillian",
    "conjugation_defect", "conservation_defect", "density_matrix",
    "populations", "validate_params", "validation_report",
    "CorrelationSeries", "correlation", "default_tau_grid",
    "timedomain_spectrum", "transform_spectrum",
    "SpectrumSeries", "coherent_weights", "default_nu_grid",
    "resolvent_apply", "spectrum_by_method", "spectrum_consistent",
    "spectrum_eq10",
    "Trajectory", "integrate", "stability_eigs", "steady_state",
]

"""Exactly solvable time-dependent two-level dynamics.

A library and CLI for driven su(2) (spin-1/2) problems whose evolution
operator closes in elementary or elliptic functions: generalized-resonant
drives, constant detuning-to-drive ratio, and two arctangent ansatz
families, plus a unitarity-preserving numerical oracle and a coupled
waveguide-mode front end.
"""

from .closed_forms import (EvolutionEntries, beta0_entries, case1_entries,
                           case2_entries, elliptic_phase,
                           modulated_probability, resonance_asymptote,
                           resonance_entries)
from .errors import (ConfigError, GenrabiError, InconsistentProfileError,
                     NumericError, QuadratureError, SingularAnsatzError,
                     StepResolutionError, UnitarityDriftError)
from .fields import (FieldProfile, PhysicalField, detuning, from_profile,
                     is_generalized_resonant, phase_derivative, to_profile,
                     transverse_area)
from .modes import (CouplingSpec, ModeState, ModeTrajectory,
                    coupling_from_config, detilde, propagate_modes, tilde,
                    to_su2_profile)
from .observables import (sigma_xy_expectation, sigma_z_expectation,
                          transition_probability)
from .propagator import (ConvergenceReport, PropagatorConfig, Trajectory,
                         propagate, richardson_check, suggested_step)
from .scenarios import (FAMILIES, ScenarioParams, closed_form_series,
                        default_window, make_scenario, scenario_time_scale)
from .theta import (AnsatzVerification, PhaseIntegrals, ThetaAnsatz,
                    ThetaEvaluator, ansatz_from_table, beta0_ansatz,
                    case1_ansatz, case2_ansatz, general_entries,
                    general_entries_series, induced_detuning, named_ansatz,
                    phase_integrals, verify_ansatz, zero_ansatz)

__version__ = "0.1.0"

__all__ = [
    "EvolutionEntries", "beta0_entries", "case1_entries", "case2_entries",
    "elliptic_phase", "modulated_probability", "resonance_asymptote",
    "resonance_entries",
    "ConfigError", "GenrabiError", "InconsistentProfileError", "NumericError",
    "QuadratureError", "SingularAnsatzError", "StepResolutionError",
    "UnitarityDriftError",
    "FieldProfile", "PhysicalField", "detuning", "from_profile",
    "is_generalized_resonant", "phase_derivative", "to_profile",
    "transverse_area",
    "CouplingSpec", "ModeState", "ModeTrajectory", "coupling_from_config",
    "detilde", "propagate_modes", "tilde", "to_su2_profile",
    "sigma_xy_expectation", "sigma_z_expectation", "transition_probability",
    "ConvergenceReport", "PropagatorConfig", "Trajectory", "propagate",
    "richardson_check", "suggested_step",
    "FAMILIES", "ScenarioParams", "closed_form_series", "default_window",
    "make_scenario", "scenario_time_scale",
    "AnsatzVerification", "PhaseIntegrals", "ThetaAnsatz", "ThetaEvaluator",
    "ansatz_from_table", "beta0_ansatz", "case1_ansatz", "case2_ansatz",
    "general_entries", "general_entries_series", "induced_detuning",
    "named_ansatz", "phase_integrals", "verify_ansatz", "zero_ansatz",
    "__version__",
]

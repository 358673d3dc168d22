"""omcomb: mean-field simulator and comb-spectrum toolkit for a cavity
optomechanical system driven by a control tone and two probe tones."""

from .dynamics import (DivergenceError, FieldState, Trajectory, final_state,
                       integrate, rhs, settle)
from .linear_response import (LinearResponse, SingularResponseError,
                              linear_response, two_probe_linear_response)
from .model import (HBAR, C_LIGHT, ConfigError, OmcombError, ParameterError,
                    PhysicalCavity, SystemParams, derive_coupling,
                    params_from_config, params_to_config, power_to_amplitude,
                    validate, with_updates)
from .pipeline import SimulationResult, SolverSettings, simulate
from .presets import BASELINE, PRESETS, baseline_params, preset_params
from .spectrum import (CombLine, CombMetrics, CombSpectrum,
                       EmptySpectrumError, NonCommensurateWindowError,
                       classify_line, comb_metrics, decompositions,
                       fft_line_amplitudes, output_spectrum,
                       project_harmonics, write_spectrum_csv)
from .steady_state import (SteadyBranch, bistability_cubic, jacobian,
                           solve_steady, vacuum_branch)

__version__ = "0.1.0"

__all__ = [
    "HBAR", "C_LIGHT", "BASELINE", "PRESETS",
    "SystemParams", "PhysicalCavity", "FieldState", "Trajectory",
    "SteadyBranch", "LinearResponse", "CombLine", "CombSpectrum",
    "CombMetrics", "SolverSettings", "SimulationResult",
    "OmcombError", "ParameterError", "ConfigError", "DivergenceError",
    "SingularResponseError", "EmptySpectrumError", "NonCommensurateWindowError",
    "validate", "derive_coupling", "power_to_amplitude",
    "params_from_config", "params_to_config", "with_updates",
    "rhs", "integrate", "final_state", "settle",
    "solve_steady", "vacuum_branch", "bistability_cubic", "jacobian",
    "linear_response", "two_probe_linear_response",
    "project_harmonics", "fft_line_amplitudes", "output_spectrum",
    "classify_line", "decompositions", "comb_metrics", "write_spectrum_csv",
    "simulate", "baseline_params", "preset_params",
]

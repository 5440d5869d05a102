"""Two laser-driven atoms as a double slit: angular photon statistics.

Simulates and analyzes the light scattered by a pair of driven two-level
atoms: the exact angular density of the next emitted photon, the stationary
emission pattern in closed form, a quantum-jump Monte Carlo unraveling that
produces individual detector clicks, and the classical two-dipole pattern
the quantum result is usually compared against.

Natural units throughout: the spontaneous decay rate is the unit of rate,
the transition wavelength the unit of length (so k0 = 2*pi), and times are
inverse decay rates.
"""

from .classical import (ClassicalConfig, classical_intensity,
                        classical_intensity_many, classical_visibility, field_at)
from .config import (ExperimentConfig, K0, config_from_dict, config_to_dict,
                     standard_config)
from .emission import (NoEmissionError, cross_term_gamma, emission_density_mixed,
                       emission_density_pure, emission_density_pure_many,
                       overlap_which_way, reset_state, total_emission_rate)
from .runconfig import ConfigError, RunConfig, load_runconfig
from .screen import (AngularGrid, AngularMap, CutSpec, FringeReport,
                     NoFringesError, accumulate_clicks, angular_map,
                     cell_averaged_map, classical_map, cut_profile,
                     fringe_count, fringe_spacing,
                     fringe_visibility_from_phases, map_distance,
                     phase_coordinate, phase_histogram, steady_map,
                     steady_map_cell_mean, visibility_along_cut)
from .selftest import run_selftests
from .states import (DIM, LABELS, LOWER_1, LOWER_2, NUMBER_OP, dm_from_pure,
                     excitation_number, ket)
from .steady import (SteadyStateSolution, equal_drive_visibility, master_rhs,
                     single_atom_steady, steady_emission_density,
                     steady_emission_density_many, steady_total_rate,
                     time_integrate_to_steady, two_atom_steady)
from .trajectory import (ClickRecord, ClickStream, DT_VALIDITY, TrajectoryState,
                         conditional_hamiltonian, first_click_directions,
                         jump_probability, no_click_step, propagator,
                         rejection_bound, run_trajectory, sample_direction)

__version__ = "0.1.0"

__all__ = [
    "AngularGrid", "AngularMap", "ClassicalConfig", "ClickRecord",
    "ClickStream", "ConfigError", "CutSpec", "DIM", "DT_VALIDITY",
    "ExperimentConfig", "FringeReport", "K0", "LABELS", "LOWER_1", "LOWER_2",
    "NUMBER_OP", "NoEmissionError", "NoFringesError", "RunConfig",
    "SteadyStateSolution", "TrajectoryState", "accumulate_clicks",
    "angular_map", "cell_averaged_map", "classical_intensity",
    "classical_intensity_many",
    "classical_map", "classical_visibility",
    "conditional_hamiltonian",
    "config_from_dict", "config_to_dict", "cross_term_gamma", "cut_profile",
    "dm_from_pure", "emission_density_mixed", "emission_density_pure",
    "emission_density_pure_many", "equal_drive_visibility",
    "excitation_number", "field_at", "first_click_directions", "fringe_count",
    "fringe_spacing", "fringe_visibility_from_phases", "jump_probability",
    "ket", "load_runconfig", "map_distance", "master_rhs", "no_click_step",
    "overlap_which_way", "phase_coordinate", "phase_histogram", "propagator",
    "rejection_bound", "reset_state", "run_selftests", "run_trajectory",
    "sample_direction", "single_atom_steady", "standard_config", "steady_map",
    "steady_map_cell_mean",
    "steady_emission_density", "steady_emission_density_many",
    "steady_total_rate", "time_integrate_to_steady", "total_emission_rate",
    "two_atom_steady", "visibility_along_cut",
]

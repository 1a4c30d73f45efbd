"""Relaxation (discrete-BGK) finite-volume solver for shallow water and blood flow on networks."""

from .diagnostics import convergence_study, exact_solution, l1_error, self_difference
from .driver import RunReport, monitor_entropy, simulate
from .junction import (Branch, JunctionError, TraceSolution, assemble_system, phi_incoming, phi_outgoing,
                       solve_junction, solve_network_junctions, trace_to_ghost)
from .models import BloodFlow, ConfigurationError, ShallowWater, make_model, velocity
from .network import Canal, Junction, Network, TopologyError, cell_centers, total_mass
from .presets import PRESETS, get_preset
from .relaxation import (SolverAbort, kinetic_interface_flux, maxwellians, reflecting_ghost, stable_dt, step)
from .riemann import (RegimeError, VacuumError, classical_junction_solve, lax_curve, sample_solution,
                      solve_riemann, transitional_curves)
from .scenario import ScenarioConfig, build_network, load_scenario, parse_scenario
from .wellbalanced import reconstruct_bf, reconstruct_sw, source_contribution

__version__ = "0.1.0"

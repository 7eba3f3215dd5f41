"""Evolutionary game toolkit for consumption-tax compliance on transaction
networks: mixed payoff matrices, subjective audit probabilities, Fermi
imitation dynamics, scale-free network generation, power-law fitting, and a
deterministic Monte Carlo sweep harness."""

from ._kernels import NUMBA_ENABLED
from .game import (AuditProbabilityFunction, GameClass, GameLabel, GameParams,
                   PayoffQuad, Strategy, build_theta, classify_game, payoff,
                   payoff_quad)
from .network import (NetworkMetrics, RewireMode, WeightedNetwork, assign_weights,
                      ba_edge_count, degree_assortativity, generate_ba,
                      generate_powerlaw_config, metrics, read_edge_list,
                      rewire_xbs, write_edge_list)
from .powerlaw import PowerLawFit, fit_powerlaw, sample_powerlaw
from .dynamics import (PopulationState, compute_fitness, fermi_prob, make_state,
                       step, step_well_mixed)
from .sim import (SimConfig, SummaryStats, SweepResult, Topology,
                  diversity_experiment, load_config, monte_carlo,
                  parse_topology, policy_experiment, run_once, sweep)
from .ingest import (CalibrationSummary, DeclarationRecord, EmpiricalCdf,
                     MatchedTransaction, calibration_summary, make_fixture,
                     merge_declarations, mismatch_ratio, read_declarations)

__version__ = "0.1.0"

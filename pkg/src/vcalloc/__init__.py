"""Allocation of graph jobs onto the service providers of a vehicular cloud."""
from .model import (AllocationResult, Assignment, GraphJob, IncompleteAssignmentError,
                    SolverMeta, SystemParams, VcTopology, derive_exchange_indicator,
                    validate_job, validate_topology)
from .objective import (FeasibilityReport, Violation, check_capacity, check_pairwise_contact,
                        check_transmission, completion_time, contact_probability,
                        exchange_cost, is_feasible, objective)
from .optimal import (Candidate, OracleRefused, brute_force_oracle, enumerate_candidates,
                      solve_optimal)
from .randomized import (HierarchicalTree, PlacementState, build_hierarchical_tree,
                         place_layer, solve_randomized)
from .scenarios import (GridCell, GridSpec, ScenarioConfig, experiment_grid, job_topology,
                        random_instance, random_vc)

__version__ = "0.1.0"

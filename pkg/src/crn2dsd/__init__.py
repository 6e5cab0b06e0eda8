"""crn2dsd: compile chemical reaction networks to domain-level DNA
strand-displacement systems, statically verify the compiled gates against
crosstalk, and simulate them stochastically."""

from .analyzer import (INTENDED, INTENDED_REVERSE, SPURIOUS, TRANSIENT,
                       AnalysisOptions, CrosstalkReport, InteractionEvent,
                       enumerate_interactions, explain, free_strand_pool,
                       reachable_states)
from .compiler import (CompileError, CompileOptions, DsdSystem, Gadget,
                       SabotageError, ToeholdAssignment, allocate_toeholds,
                       buffer_sets, build_system, check_fanin_bound,
                       compile_crn, compile_reaction,
                       sabotage_linker_equals_t, sabotage_share_linker_toehold,
                       sabotage_swap_order, species_key, species_strand)
from .crn import (Crn, ParseError, Reaction, final_reactant, make_crn,
                  parse_crn, serialize_crn)
from .dsd import (Complex, Domain, DomainKind, Exposure, Role, Strand,
                  check_complex, exposed_sites, recognition, toehold)
from .ordering import (InfeasibleOrdering, OrderingViolation, RoleTable,
                       solve_ordering, validate_ordering)
from .sim import (AuditError, LowLevelReaction, SimOptions, SsaNetwork,
                  StopCondition, SystemState, Trajectory, audit_trajectory,
                  available_backends, build_ssa_network, in_flight, map_state,
                  run_trajectories, simulate, ssa_backend)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

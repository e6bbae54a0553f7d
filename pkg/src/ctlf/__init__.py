"""Model checking and runtime monitoring for CTLF, a counting branching-time logic
over series of generated outputs."""

from .formula import (
    And, Atom, BlackBox, Box, Circ, Dagger, Nabla, Not, Or, Tri,
    format_formula, parse_formula,
)
from .mitigation import (
    Decision, MitigationPlan, Policy, filter_stream, max_fair_subset_size,
    plan_removals, streaming_reject,
)
from .model import (
    ModelSpec, Path, WorldId, children_of, count_paths_from, enumerate_complete_paths,
    label_of, parent_of, path_for_outcomes, root_path, world_for_outcomes,
)
from .monitor import (
    MonitorState, Status, Verdict, ingest, next_step_outlook, q1_verdict,
    q2_completion_probability, replay, residual_odds, start,
)
from .oracle import Oracle, eval_path_oracle, eval_state_oracle
from .semantics import (
    Checker, CountVector, Distribution, eval_path, eval_state, is_sigma_compatible,
    prefix_counts, sigma_completions,
)

__version__ = "0.1.0"

"""Largest on-target subsets of an observed series, and which outputs to drop.

A subset of size ``k`` realizes the target exactly when every ``mu(p) * k``
is an integer no larger than the number of ``p`` outputs available.  The
best ``k`` is therefore the largest multiple of the common denominator of
the target frequencies that fits under every ``counts[p] / mu(p)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import UnknownOutcome
from .monitor import MonitorState, ingest, start
from .semantics import CountVector, Distribution


class Policy(str, enum.Enum):
    KEEP_EARLIEST = "earliest"
    KEEP_LATEST = "latest"


class Decision(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass(frozen=True)
class MitigationPlan:
    keep: list[int]
    remove: list[int]
    kept_counts: CountVector
    achieved: Optional[Distribution]
    optimal_size: int
    trims_underrepresented: bool = False


def _lcm_denominator(target: Distribution) -> int:
    return math.lcm(*(v.denominator for _, v in target.items()))


def max_fair_subset_size(counts: CountVector | Mapping[str, int], target: Distribution,
                         limit: Optional[int] = None) -> int:
    """Largest ``k`` such that a ``k``-subset of `counts` matches `target` exactly.

    `limit` optionally caps ``k`` (e.g. at a planned series length).
    """
    step = _lcm_denominator(target)
    bound = None
    for p, mu in target.items():
        if mu:
            b = math.floor(Fraction(counts[p]) / mu)
            bound = b if bound is None else min(bound, b)
    if limit is not None:
        bound = min(bound, limit)
    return (bound // step) * step


def plan_removals(observed: Sequence[str], target: Distribution,
                  policy: Policy = Policy.KEEP_EARLIEST) -> MitigationPlan:
    """Keep an optimal on-target subset; positions are 1-based."""
    for o in observed:
        if o not in target.freq:
            raise UnknownOutcome(f"{o!r} has no target frequency")
    counts = CountVector.of(observed, list(target))
    k = max_fair_subset_size(counts, target)
    quota = {p: int(mu * k) for p, mu in target.items()}
    positions: dict[str, list[int]] = {p: [] for p in target}
    for pos, o in enumerate(observed, start=1):
        positions[o].append(pos)
    keep = []
    for p, pos in positions.items():
        chosen = pos[:quota[p]] if policy == Policy.KEEP_EARLIEST else pos[len(pos) - quota[p]:]
        keep.extend(chosen)
    keep.sort()
    kept = set(keep)
    remove = [pos for pos in range(1, len(observed) + 1) if pos not in kept]
    total = len(observed)
    # an outcome at or under its target share still lost items to integrality
    trims = any(quota[p] < counts[p] and Fraction(counts[p], total) <= mu
                for p, mu in target.items() if total)
    return MitigationPlan(
        keep=keep,
        remove=remove,
        kept_counts=CountVector({p: quota[p] for p in target}),
        achieved=target if k else None,
        optimal_size=k,
        trims_underrepresented=trims,
    )


def streaming_reject(state: MonitorState,
                     projected: Optional[CountVector | Mapping[str, int]] = None) -> dict[str, Decision]:
    """Accept/reject decision for each possible next output.

    `state` holds the outputs accepted so far and its model's series length is
    the planned horizon.  With `projected` final counts, the subset size is
    the best achievable for them; without, every outcome is assumed able to
    fill all remaining slots and the size is capped at the horizon.
    """
    target, horizon = state.target, state.spec.n
    if projected is not None:
        k = max_fair_subset_size(projected, target)
    else:
        left = horizon - state.steps
        optimistic = {p: state.counts[p] + left for p in state.spec.alphabet}
        k = max_fair_subset_size(optimistic, target, limit=horizon)
    return {p: Decision.REJECT if state.counts[p] >= target[p] * k else Decision.ACCEPT
            for p in state.spec.alphabet}


def filter_stream(observed: Sequence[str], target: Distribution, spec,
                  projected: Optional[CountVector | Mapping[str, int]] = None) -> list[int]:
    """Run :func:`streaming_reject` over a series; returns accepted 1-based positions."""
    state = start(spec, target)
    accepted = []
    for pos, o in enumerate(observed, start=1):
        if streaming_reject(state, projected)[o] == Decision.ACCEPT:
            state = ingest(state, o)
            accepted.append(pos)
    return accepted

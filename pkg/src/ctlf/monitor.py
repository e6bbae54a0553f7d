"""Online monitoring of an output series against a target distribution.

A :class:`MonitorState` is an immutable snapshot; :func:`ingest` returns the
next one.  Three questions can be asked of any snapshot:

* :func:`q1_verdict` -- is the series so far within the target?
* :func:`q2_completion_probability` -- what fraction of the possible
  continuations still end on target (uniform measure over the tree)?
* :func:`next_step_outlook` -- per outcome, the share of the remaining
  outputs it must take on any on-target completion.

:func:`residual_odds` answers the same kind of question for a model that
samples its training set without replacement.  That measure is kept apart
from the tree measure and the two are never combined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DatasetExhausted, EmptySeries, MissingDataset, NotExtendable,
    SeriesComplete, UnknownOutcome,
)
from .formula import Atom, Box, format_formula
from .model import ModelSpec, WorldId, children_of, count_paths_from, label_of
from .semantics import (
    CountVector, Distribution, as_fraction, checker_for, extendable_continuations,
    residual_quotas, sigma_completions,
)


class Status(str, enum.Enum):
    COMPLIANT = "Compliant"
    AT_RISK = "AtRisk"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class Verdict:
    status: Status
    ratios: dict[str, Fraction]
    formulas: list[tuple[str, bool]] = field(default_factory=list)


@dataclass(frozen=True)
class MonitorState:
    spec: ModelSpec
    target: Distribution
    observed: tuple[str, ...] = ()
    counts: Optional[CountVector] = None
    current_world: Optional[WorldId] = None
    tolerance: Fraction = Fraction(0)
    dataset_counts: Optional[CountVector] = None

    def __post_init__(self):
        self.target.check_alphabet(self.spec.alphabet)
        object.__setattr__(self, "tolerance", as_fraction(self.tolerance))
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        if self.counts is None:
            object.__setattr__(self, "counts", CountVector.of(self.observed, self.spec.alphabet))

    @property
    def steps(self) -> int:
        return len(self.observed)


def start(spec: ModelSpec, target: Distribution, epsilon=0,
          dataset: Optional[CountVector] = None) -> MonitorState:
    return MonitorState(spec, target, tolerance=as_fraction(epsilon), dataset_counts=dataset)


def ingest(state: MonitorState, outcome: str) -> MonitorState:
    """Advance to the child of the current world labeled `outcome`."""
    spec = state.spec
    if outcome not in spec.alphabet:
        raise UnknownOutcome(f"{outcome!r} not in alphabet {list(spec.alphabet)}")
    if state.steps >= spec.n:
        raise SeriesComplete(f"series already has {spec.n} outputs")
    if state.current_world is None:
        candidates = list(spec.worlds(1))
    else:
        candidates = children_of(state.current_world, spec)
    nxt = next((c for c in candidates if label_of(c, spec) == outcome), None)
    if nxt is None:
        raise UnknownOutcome(f"no successor world labeled {outcome!r}")
    return replace(state, observed=state.observed + (outcome,),
                   counts=state.counts.add(outcome), current_world=nxt)


def replay(spec: ModelSpec, target: Distribution, outcomes: Sequence[str], epsilon=0,
           dataset: Optional[CountVector] = None) -> MonitorState:
    state = start(spec, target, epsilon, dataset)
    for o in outcomes:
        state = ingest(state, o)
    return state


def _band_recoverable(state: MonitorState) -> bool:
    # some final count vector reachable from here lies inside the band
    n, eps = state.spec.n, state.tolerance
    lo_sum = hi_sum = 0
    for p in state.spec.alphabet:
        mu = state.target[p]
        lo = max(state.counts[p], math.ceil((mu - eps) * n))
        hi = math.floor((mu + eps) * n)
        if lo > hi:
            return False
        lo_sum += lo
        hi_sum += hi
    return lo_sum <= n <= hi_sum


def q1_verdict(state: MonitorState) -> Verdict:
    """Current ratios against the target band, plus the matching BOX formulas."""
    i = state.steps
    if i == 0:
        raise EmptySeries("no outputs observed yet")
    eps = state.tolerance
    ratios = {p: Fraction(state.counts[p], i) for p in state.spec.alphabet}
    checker = checker_for(state.spec, state.target)
    formulas = []
    for p in state.spec.alphabet:
        f = Box(max(Fraction(0), state.target[p] - eps), Atom(p))
        formulas.append((format_formula(f), checker.holds(state.current_world, f)))
    if all(abs(ratios[p] - state.target[p]) <= eps for p in ratios) and all(h for _, h in formulas):
        status = Status.COMPLIANT
    elif not _band_recoverable(state):
        status = Status.VIOLATED
    else:
        status = Status.AT_RISK
    return Verdict(status, ratios, formulas)


def q2_completion_probability(state: MonitorState, horizon: Optional[int] = None) -> Fraction:
    """Fraction of continuations that stay on target.

    With the default horizon (the full series length) this is the number of
    target-compatible completions over all completions, i.e. the largest
    ``q`` for which ``DAG q`` holds on the observed prefix.  A shorter
    horizon asks whether the prefix is still extendable after that many
    outputs.
    """
    n, i = state.spec.n, state.steps
    h = n if horizon is None else horizon
    if not i <= h <= n:
        raise ValueError(f"horizon {h} outside {i}..{n}")
    if h == n:
        total = state.spec.l ** (n - i) if state.current_world is None else \
            count_paths_from(state.current_world, state.spec)
        return Fraction(sigma_completions(state.counts, state.target, n), total)
    good = extendable_continuations(state.counts, state.target, n, state.spec.alphabet, h - i)
    return Fraction(good, state.spec.l ** (h - i))


def next_step_outlook(state: MonitorState) -> dict[str, Fraction]:
    """Largest ``q`` with ``TRI q p`` at the current world, per outcome ``p``."""
    n, i = state.spec.n, state.steps
    if i >= n:
        raise SeriesComplete("no next output in a complete series")
    res = residual_quotas(state.counts, state.target, n)
    if res is None:
        raise NotExtendable("no on-target completion of the observed prefix")
    return {p: Fraction(res[p], n - i) for p in state.spec.alphabet}


def residual_counts(state: MonitorState) -> dict[str, int]:
    if state.dataset_counts is None:
        raise MissingDataset("odds need the training set composition")
    out = {}
    for p in state.spec.alphabet:
        r = state.dataset_counts[p] - state.counts[p]
        if r < 0:
            raise DatasetExhausted(f"observed {state.counts[p]} {p!r} but dataset has "
                                   f"{state.dataset_counts[p]}")
        out[p] = r
    return out


def residual_odds(state: MonitorState) -> dict[tuple[str, str], Optional[Fraction]]:
    """Odds of the next draw between every ordered pair of outcomes.

    ``None`` marks pairs whose second outcome is exhausted in the dataset.
    """
    res = residual_counts(state)
    return {(a, b): (Fraction(res[a], res[b]) if res[b] else None)
            for a in state.spec.alphabet for b in state.spec.alphabet if a != b}

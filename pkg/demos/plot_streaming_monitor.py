r"""
Monitoring a stream of outputs
==============================

The monitor keeps the observed counts and the current world.  After every
output it reports whether the series so far is on target, the share of
completions that can still end on target, and how much of the remaining
budget each outcome may take.  With the composition of the training set it
also tracks the odds of the next draw.
"""

from fractions import Fraction

from ctlf import CountVector, Distribution, ModelSpec, ingest, q1_verdict, start
from ctlf.monitor import next_step_outlook, q2_completion_probability, residual_counts

spec = ModelSpec.of(("M", "F"), 6)
fair = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})
urn = CountVector({"M": 15, "F": 5})

state = start(spec, fair, dataset=urn)
for outcome in ["M", "F", "F", "M", "M"]:
    state = ingest(state, outcome)
    verdict = q1_verdict(state)
    res = residual_counts(state)
    try:
        outlook = {p: str(v) for p, v in next_step_outlook(state).items()}
    except Exception as e:
        outlook = type(e).__name__
    print(f"{outcome} -> w{state.current_world}  {verdict.status.value:<9}"
          f" q2={q2_completion_probability(state)!s:<5} outlook={outlook}"
          f" odds M:F={res['M']}/{res['F']}")

###############################################################################
# Tolerance
# ---------
# With a tolerance band the verdict forgives small deviations.

loose = start(spec, fair, epsilon=Fraction(1, 6))
for outcome in "MMF":
    loose = ingest(loose, outcome)
print("MMF with eps=1/6:", q1_verdict(loose).status.value)

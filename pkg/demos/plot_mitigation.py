r"""
Repairing a biased series
=========================

Twelve outputs come out 9 ``M`` to 3 ``F``.  The largest on-target subset
keeps all three ``F`` outputs and three ``M`` outputs.  The offline plan and
the streaming filter agree on which ones.
"""

from fractions import Fraction

from ctlf import CountVector, Distribution, ModelSpec, Policy, filter_stream, plan_removals

fair = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})
series = list("MFMFMMMFMMMM")

for policy in Policy:
    plan = plan_removals(series, fair, policy)
    kept = "".join(series[k - 1] for k in plan.keep)
    print(f"{policy.value:<8} keep {plan.keep} -> {kept}  remove {plan.remove}")

###############################################################################
# Streaming
# ---------
# Knowing the final counts in advance, the filter rejects every ``M`` once
# three have been accepted.

spec = ModelSpec.of(("M", "F"), len(series))
accepted = filter_stream(series, fair, spec, projected=CountVector.of(series, ("M", "F")))
print("streaming keeps", accepted)

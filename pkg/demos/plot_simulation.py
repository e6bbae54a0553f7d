r"""
Simulated completions
=====================

Completing a prefix uniformly at random, the share of on-target series
should match the exact counting answer.  Each estimate carries a 95%
interval; across many seeds roughly 95% of the intervals contain the exact
value.
"""

from fractions import Fraction

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ctlf import Distribution, ModelSpec, root_path
from ctlf.simulator import SimConfig, completion_report, estimate_completion_probability

spec = ModelSpec.of(("M", "F"), 6)
fair = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})

for world in [(4, 7), (3, 1)]:
    report = completion_report(root_path(world, spec), fair, SimConfig(spec, trials=100_000, seed=42))
    print(world, {k: str(v) for k, v in report.items()})

###############################################################################
# Coverage over seeds
# -------------------

prefix = root_path((3, 1), spec)
est, ci = np.array([estimate_completion_probability(prefix, fair, SimConfig(spec, trials=10_000, seed=s))
                    for s in range(100)]).T
inside = np.abs(est - 1 / 8) <= ci
print(f"{inside.sum()}/100 intervals contain 1/8")

fig, ax = plt.subplots()
ax.errorbar(np.arange(100), est, yerr=ci, fmt=".", color="gray")
ax.errorbar(np.flatnonzero(~inside), est[~inside], yerr=ci[~inside], fmt=".", color="red")
ax.axhline(1 / 8)
ax.set_xlabel("seed")
ax.set_ylabel("estimated completion probability")
fig.savefig("coverage.png")

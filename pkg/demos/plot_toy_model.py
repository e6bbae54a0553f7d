r"""
The six-output toy model
========================

A generator emits six outputs, each either ``M`` or ``F``.  Every possible
series is a branch of a binary tree with 2**6 leaves; worlds are addressed
``i.j`` (level, index).  This walk-through evaluates counting formulas at a
few worlds and cross-checks each one against brute-force enumeration.
"""

from fractions import Fraction

from ctlf import Checker, Distribution, ModelSpec, Oracle, parse_formula, root_path
from ctlf.formula import format_formula

spec = ModelSpec.of(("M", "F"), 6)
fair = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})
checker = Checker(spec, fair)
oracle = Oracle(spec, fair)

###############################################################################
# State formulas
# --------------
# ``BOX q p``: at least a share q of the outputs so far are p.
# ``BBOX q p``: some on-target series reaches the same step with share >= q.
# ``CIRC q p``: the outputs so far already make up q of the whole series.
# ``TRI q p``: some on-target continuation gives p a share >= q of what is left.

claims = [
    ("3.1", "BOX 1 M"),
    ("3.2", "BOX 2/3 M"),
    ("3.1", "BBOX 1 F"),
    ("3.1", "CIRC 3/6 M AND CIRC 0 F"),
    ("3.1", "TRI 1 F"),
    ("3.2", "TRI 2/3 F"),
]
for world, text in claims:
    w = tuple(map(int, world.split(".")))
    f = parse_formula(text)
    print(f"w{world}  {format_formula(f):<26} closed form: {checker.holds(w, f)!s:<5}"
          f"  enumeration: {oracle.holds(w, f)}")

###############################################################################
# Witnesses
# ---------
# The existential operators come with a concrete on-target series.

print("BBOX 1 F at w3.1 via", checker.witness((3, 1), parse_formula("BBOX 1 F")))
print("TRI 1 F at w3.1 via ", checker.witness((3, 1), parse_formula("TRI 1 F")))

###############################################################################
# Path formulas
# -------------
# ``DAG q p`` on a prefix: at least q of its completions are on target.

prefix = root_path((3, 1), spec)
print("DAG ratio on", prefix, "=", checker.path_measure(prefix, parse_formula("DAG 0 M")))

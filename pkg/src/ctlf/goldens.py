"""Reference cases on the six-step, two-outcome toy model and the selftest runner.

The toy model has outcomes ``M`` and ``F``, six outputs per series and a
50/50 target.  Each case evaluates one claim worked out by hand and compares
it with the expected value as a string.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .formula import parse_formula
from .mitigation import plan_removals, streaming_reject
from .model import (
    ModelSpec, children_of, count_paths_from, enumerate_complete_paths,
    parent_of, root_path,
)
from .monitor import (
    ingest, next_step_outlook, q1_verdict, q2_completion_probability,
    replay, residual_counts, start,
)
from .semantics import CountVector, Distribution, Checker, prefix_counts, sigma_completions

FAIR = Distribution({"M": Fraction(1, 2), "F": Fraction(1, 2)})
# Twelve outputs drawn from the 3:1 training set; 3M/2F after five.
BIASED_12 = ("M", "F", "M", "F", "M", "M", "M", "F", "M", "M", "M", "M")


@dataclass(frozen=True)
class GoldenCase:
    case_id: str
    ref: str
    expected: str
    compute: Callable[[ModelSpec], str]


def _state(world: str, text: str):
    i, j = map(int, world.split("."))

    def run(spec):
        return str(Checker(spec, FAIR).holds((i, j), parse_formula(text)))
    return run


def _path(end: str, text: str):
    i, j = map(int, end.split("."))

    def run(spec):
        return str(Checker(spec, FAIR).holds_path(root_path((i, j), spec), parse_formula(text)))
    return run


def _odds(extra: tuple[str, ...]):
    def run(spec):
        s = start(spec, FAIR, dataset=CountVector({"M": 15, "F": 5}))
        for o in ("M", "F", "F", "M") + extra:
            s = ingest(s, o)
        res = residual_counts(s)
        return f"{res['M']}/{res['F']}"
    return run


def _q3(spec):
    state = replay(spec, FAIR, ("M", "F", "F", "M"))
    return str(q2_completion_probability(state))


def _mitigation(spec):
    plan = plan_removals(BIASED_12, FAIR)
    removed = [BIASED_12[k - 1] for k in plan.remove]
    return f"{plan.optimal_size}:{''.join(removed)}"


def _reject_at_o5(spec):
    s = replay(ModelSpec.of(spec.alphabet, 12, spec.labeler), FAIR, BIASED_12[:5])
    d = streaming_reject(s, projected=CountVector({"M": 9, "F": 3}))
    return f"M={d['M'].value},F={d['F'].value}"


CASES: list[GoldenCase] = [
    GoldenCase("valuation.w1.1.M", "toy model: atom at root", "True", _state("1.1", "M")),
    GoldenCase("valuation.w1.1.notF", "toy model: negated atom", "True", _state("1.1", "NOT F")),
    GoldenCase("box.w3.1", "toy model: BOX 1 M", "True", _state("3.1", "BOX 1 M")),
    GoldenCase("box.w3.2", "toy model: BOX 2/3 M", "True", _state("3.2", "BOX 2/3 M")),
    GoldenCase("bbox.w3.1", "toy model: BBOX 1 F via w3.8", "True", _state("3.1", "BBOX 1 F")),
    GoldenCase("bbox.w3.2", "toy model: BBOX 1 F via w3.8", "True", _state("3.2", "BBOX 1 F")),
    GoldenCase("circ.w3.1", "toy model: CIRC 3/6 M AND CIRC 0 F", "True",
               _state("3.1", "CIRC 3/6 M AND CIRC 0 F")),
    GoldenCase("tri.w3.1", "toy model: TRI 1 F via w4.2", "True", _state("3.1", "TRI 1 F")),
    GoldenCase("tri.w3.2", "toy model: TRI 2/3 F via w4.3", "True", _state("3.2", "TRI 2/3 F")),
    GoldenCase("nab.path-2-63", "toy model: NAB 1/6 M on w1.2..w6.63", "True",
               _path("6.63", "NAB 1/6 M")),
    GoldenCase("dag.w3.1", "toy model: DAG 1/8 M on w1.1..w3.1", "True",
               _path("3.1", "DAG 1/8 M")),
    GoldenCase("tree.parent.w3.5", "index arithmetic: parent", "2.3",
               lambda spec: str(parent_of((3, 5), spec))),
    GoldenCase("tree.children.w2.3", "index arithmetic: children", "3.5,3.6",
               lambda spec: ",".join(map(str, children_of((2, 3), spec)))),
    GoldenCase("tree.rootpath.w3.5", "index arithmetic: root path", "1.2,2.3,3.5",
               lambda spec: str(root_path((3, 5), spec))),
    GoldenCase("tree.paths-from.w2.3", "index arithmetic: 2^(6-2)", "16",
               lambda spec: str(count_paths_from((2, 3), spec))),
    GoldenCase("tree.complete-paths", "index arithmetic: 2^6 series", "64",
               lambda spec: str(sum(1 for _ in enumerate_complete_paths(spec)))),
    GoldenCase("monitor.w4.7.box", "balanced prefix M,F,F,M", "True",
               _state("4.7", "BOX 1/2 M AND BOX 1/2 F")),
    GoldenCase("monitor.w4.7.q1", "balanced prefix M,F,F,M: verdict", "Compliant",
               lambda spec: q1_verdict(replay(spec, FAIR, ("M", "F", "F", "M"))).status.value),
    GoldenCase("monitor.w4.7.completions", "2 of 4 continuations on target", "2/4",
               lambda spec: f"{sigma_completions(prefix_counts((4, 7), spec), FAIR, spec.n)}/"
                            f"{count_paths_from((4, 7), spec)}"),
    GoldenCase("monitor.w4.7.q2", "completion probability 1/2", "1/2", _q3),
    GoldenCase("monitor.w4.7.dag", "DAG 1/2 M on w1.1..w4.7", "True",
               _path("4.7", "DAG 1/2 M")),
    GoldenCase("monitor.w4.7.tri", "TRI 1/2 F AND TRI 1/2 M", "True",
               _state("4.7", "TRI 1/2 F AND TRI 1/2 M")),
    GoldenCase("monitor.w4.7.outlook", "next-step outlook", "M=1/2,F=1/2",
               lambda spec: ",".join(f"{p}={v}" for p, v in
                                     next_step_outlook(replay(spec, FAIR, ("M", "F", "F", "M"))).items())),
    GoldenCase("odds.o5", "15M/5F urn after 2M/2F", "13/3", _odds(())),
    GoldenCase("odds.o6.M", "then M", "12/3", _odds(("M",))),
    GoldenCase("odds.o6.F", "then F", "13/2", _odds(("F",))),
    GoldenCase("odds.o7.MM", "then M, M", "11/3", _odds(("M", "M"))),
    GoldenCase("odds.o7.MF", "then M, F", "12/2", _odds(("M", "F"))),
    GoldenCase("odds.o7.FM", "then F, M", "12/2", _odds(("F", "M"))),
    GoldenCase("odds.o7.FF", "then F, F", "13/1", _odds(("F", "F"))),
    GoldenCase("mitigation.size", "9M/3F -> 6 kept, 6 M removed", "6:MMMMMM", _mitigation),
    GoldenCase("mitigation.reject-o5", "M quota exhausted at 3M/2F", "M=Reject,F=Accept",
               _reject_at_o5),
]


def toy_model(labeler=None) -> ModelSpec:
    return ModelSpec(2, 6, ("M", "F"), labeler)


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    ref: str
    expected: str
    got: str
    passed: bool


def run_goldens(labeler=None) -> list[CaseResult]:
    spec = toy_model(labeler)
    out = []
    for case in CASES:
        try:
            got = case.compute(spec)
        except Exception as e:  # a failing case must not hide the others
            got = f"error: {type(e).__name__}"
        out.append(CaseResult(case.case_id, case.ref, case.expected, got, got == case.expected))
    return out


def oracle_sweep(max_n: int = 5) -> CaseResult:
    """Closed form vs brute force on every world, depth-1 formulas, l=2 and l=3."""
    from .formula import Atom, BlackBox, Box, Circ, Not, Tri
    from .oracle import Oracle

    qs = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
    mismatches = checked = 0
    for alphabet, ns in (("MF", range(1, max_n + 1)), ("ABC", range(1, min(max_n, 3) + 1))):
        lits = [Atom(a) for a in alphabet] + [Not(Atom(a)) for a in alphabet]
        forms = lits + [op(q, g) for op in (Box, BlackBox, Circ, Tri) for q in qs for g in lits]
        for n in ns:
            spec = ModelSpec.of(tuple(alphabet), n)
            sigma = Distribution.uniform(tuple(alphabet))
            fast, slow = Checker(spec, sigma), Oracle(spec, sigma)
            for f in forms:
                for w in spec.worlds():
                    checked += 1
                    mismatches += fast.holds(w, f) != slow.holds(w, f)
    return CaseResult("oracle.sweep", "closed form vs enumeration", "0 mismatches",
                      f"{mismatches} mismatches", mismatches == 0)


def run_selftest(labeler=None, sweep: bool = True) -> list[CaseResult]:
    results = run_goldens(labeler)
    if sweep:
        results.append(oracle_sweep())
    return results

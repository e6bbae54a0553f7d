"""JSON readers and writers for models, targets, queries, traces and reports.

Rationals travel as strings (``"1/2"``, ``"3"``) so nothing is rounded.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import IO, Any, Iterator, Mapping, Optional

from .formula import Nabla, Dagger, parse_formula
from .mitigation import MitigationPlan
from .model import ExplicitLabeling, ModelSpec, Path, WorldId
from .monitor import (
    MonitorState, next_step_outlook, q1_verdict, q2_completion_probability,
    residual_counts,
)
from .errors import CTLFError
from .semantics import CountVector, Distribution, checker_for


def rat(q: Optional[Fraction]) -> Optional[str]:
    if q is None:
        return None
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def model_from_json(obj: Mapping[str, Any]) -> ModelSpec:
    alphabet = tuple(obj["alphabet"])
    labeling = obj.get("labeling", "canonical")
    labeler = None
    if isinstance(labeling, Mapping):
        labeler = ExplicitLabeling(labeling["explicit"])
    elif labeling != "canonical":
        raise ValueError(f"unknown labeling {labeling!r}")
    l = int(obj.get("l", len(alphabet)))
    return ModelSpec(l, int(obj["n"]), alphabet, labeler)


def model_to_json(spec: ModelSpec) -> dict:
    out = {"l": spec.l, "n": spec.n, "alphabet": list(spec.alphabet)}
    if spec.labeler is None:
        out["labeling"] = "canonical"
    elif isinstance(spec.labeler, ExplicitLabeling):
        out["labeling"] = {"explicit": spec.labeler.as_dict()}
    else:
        raise ValueError("custom labelers cannot be serialized")
    return out


def distribution_from_json(obj: Mapping[str, Any]) -> Distribution:
    return Distribution({p: v for p, v in obj.items()})


def distribution_to_json(sigma: Distribution) -> dict[str, str]:
    return {p: rat(v) for p, v in sigma.items()}


def counts_from_json(obj: Mapping[str, Any]) -> CountVector:
    return CountVector({p: int(v) for p, v in obj.items()})


def parse_path(spec_text) -> Path:
    items = spec_text.split(",") if isinstance(spec_text, str) else spec_text
    return Path(tuple(WorldId.parse(s) for s in items))


def run_query(spec: ModelSpec, sigma: Optional[Distribution], query: Mapping[str, Any]) -> dict:
    """Evaluate ``{"world": "i.j", "formula": ...}`` or ``{"path": [...], "formula": ...}``."""
    f = parse_formula(query["formula"])
    checker = checker_for(spec, sigma)
    if isinstance(f, (Nabla, Dagger)):
        if "path" not in query:
            raise ValueError("path formulas need a 'path'")
        p = parse_path(query["path"])
        ratio = checker.path_measure(p, f)
        holds = ratio is not None and ratio >= f.q
        witness = checker.path_witness(p, f)
    else:
        if "world" not in query:
            raise ValueError("state formulas need a 'world'")
        w = WorldId.parse(query["world"])
        holds = checker.holds(w, f)
        ratio = checker.measure(w, f)
        witness = checker.witness(w, f)
    return {"holds": holds, "ratio": rat(ratio),
            "witness": None if witness is None else [str(u) for u in witness]}


def read_trace(stream: IO[str]) -> Iterator[str]:
    """Outcomes from JSON lines ``{"seq": k, "outcome": "M"}``; blank lines are skipped."""
    last = 0
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            ev = json.loads(line)
            outcome = ev["outcome"]
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ValueError(f"line {lineno}: malformed trace event ({e})") from None
        if not isinstance(outcome, str):
            raise ValueError(f"line {lineno}: outcome must be a string")
        seq = ev.get("seq")
        if seq is not None:
            if not isinstance(seq, int) or seq <= last:
                raise ValueError(f"line {lineno}: seq must increase")
            last = seq
        yield outcome


def verdict_to_json(state: MonitorState) -> dict:
    v = q1_verdict(state)
    out: dict[str, Any] = {
        "seq": state.steps,
        "world": str(state.current_world),
        "status": v.status.value,
        "ratios": {p: rat(r) for p, r in v.ratios.items()},
        "formulas": [{"formula": t, "holds": h} for t, h in v.formulas],
        "q2": rat(q2_completion_probability(state)),
    }
    try:
        out["outlook"] = {p: rat(r) for p, r in next_step_outlook(state).items()}
    except CTLFError:
        out["outlook"] = None
    if state.dataset_counts is not None:
        res = residual_counts(state)
        alphabet = state.spec.alphabet
        # odds keep the residual counts unreduced, e.g. "12/3"
        out["odds"] = {f"{a}:{b}": f"{res[a]}/{res[b]}" for a in alphabet for b in alphabet if a != b}
    return out


def plan_to_json(plan: MitigationPlan) -> dict:
    return {
        "keep": plan.keep,
        "remove": plan.remove,
        "achieved": None if plan.achieved is None else distribution_to_json(plan.achieved),
        "optimal_size": plan.optimal_size,
        "trims_underrepresented": plan.trims_underrepresented,
    }


def report_to_json(report: Mapping[str, Any]) -> dict:
    out = dict(report)
    out["exact"] = rat(report["exact"])
    out["estimate"] = round(float(report["estimate"]), 6)
    out["ci95"] = round(float(report["ci95"]), 6)
    return out


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)

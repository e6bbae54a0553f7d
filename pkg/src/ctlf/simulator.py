"""Monte Carlo cross-checks for the exact counting results.

This is the only module that uses floating point.  Exact values come in as
``Fraction`` and are converted only to be compared with estimates.

Trials are drawn in fixed-size chunks, each with its own generator spawned
from ``SeedSequence(seed)``.  The sample stream therefore depends only on the
seed and the trial count, never on how chunks are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import Unsupported, UrnExhausted
from .model import ModelSpec, Path, check_path, path_for_outcomes, path_labels
from .semantics import CountVector, Distribution, residual_quotas, sigma_completions

CHUNK = 1 << 15
Z95 = 1.959963984540054


@dataclass(frozen=True)
class TreeUniform:
    """Every child equally likely, roots included."""


@dataclass(frozen=True)
class IID:
    weights: Distribution


@dataclass(frozen=True)
class WithoutReplacement:
    dataset: CountVector


Sampling = Union[TreeUniform, IID, WithoutReplacement]


@dataclass(frozen=True)
class SimConfig:
    spec: ModelSpec
    sampling: Sampling = field(default_factory=TreeUniform)
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.spec.canonical:
            raise Unsupported("simulation needs the canonical labeling")
        if isinstance(self.sampling, IID):
            self.sampling.weights.check_alphabet(self.spec.alphabet)


def _chunk_rngs(seed: int, trials: int):
    n_chunks = -(-trials // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for k, child in enumerate(children):
        yield np.random.default_rng(child), min(CHUNK, trials - k * CHUNK)


def _draw_counts(rng, sampling: Sampling, spec: ModelSpec, steps: int, size: int,
                 already: Optional[CountVector] = None) -> np.ndarray:
    """Outcome counts of `size` independent continuations of length `steps`.

    Returns an array of shape ``(size, l)`` in alphabet order.
    """
    l = spec.l
    if isinstance(sampling, TreeUniform):
        offsets = rng.integers(0, l, size=(size, steps))
        return np.stack([(offsets == t).sum(axis=1) for t in range(l)], axis=1)
    if isinstance(sampling, IID):
        probs = [float(sampling.weights[p]) for p in spec.alphabet]
        draws = rng.choice(l, size=(size, steps), p=probs)
        return np.stack([(draws == t).sum(axis=1) for t in range(l)], axis=1)
    left = [sampling.dataset[p] - (already[p] if already else 0) for p in spec.alphabet]
    if min(left) < 0 or sum(left) < steps:
        raise UrnExhausted(f"urn holds {max(sum(left), 0)} items, {steps} requested")
    return rng.multivariate_hypergeometric(left, steps, size=size)


def sample_series(cfg: SimConfig, rng: Optional[np.random.Generator] = None) -> Path:
    """One complete series drawn according to ``cfg.sampling``."""
    spec = cfg.spec
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    s = cfg.sampling
    if isinstance(s, TreeUniform):
        picks = rng.integers(0, spec.l, size=spec.n)
    elif isinstance(s, IID):
        picks = rng.choice(spec.l, size=spec.n, p=[float(s.weights[p]) for p in spec.alphabet])
    else:
        urn = np.repeat(np.arange(spec.l), [s.dataset[p] for p in spec.alphabet])
        if len(urn) < spec.n:
            raise UrnExhausted(f"urn holds {len(urn)} items, series needs {spec.n}")
        picks = rng.permutation(urn)[:spec.n]
    return path_for_outcomes([spec.alphabet[t] for t in picks], spec)


def estimate_completion_probability(prefix: Path, sigma: Distribution,
                                    cfg: SimConfig) -> tuple[float, float]:
    """Share of sampled completions of `prefix` that end on target, with Wald 95% half-width."""
    spec = cfg.spec
    check_path(prefix, spec)
    if prefix.start.level != 1:
        raise ValueError("prefix must start at a root world")
    seen = CountVector.of(path_labels(prefix, spec), spec.alphabet)
    res = residual_quotas(seen, sigma, spec.n)
    if res is None:
        return 0.0, 0.0
    need = np.array([res[p] for p in spec.alphabet])
    steps = spec.n - len(prefix)
    hits = 0
    for rng, size in _chunk_rngs(cfg.seed, cfg.trials):
        counts = _draw_counts(rng, cfg.sampling, spec, steps, size, seen)
        hits += int(np.all(counts == need, axis=1).sum())
    est = hits / cfg.trials
    return est, Z95 * math.sqrt(est * (1 - est) / cfg.trials)


def exact_completion_probability(prefix: Path, sigma: Distribution, spec: ModelSpec) -> Fraction:
    seen = CountVector.of(path_labels(prefix, spec), spec.alphabet)
    return Fraction(sigma_completions(seen, sigma, spec.n), spec.l ** (spec.n - len(prefix)))


def completion_report(prefix: Path, sigma: Distribution, cfg: SimConfig) -> dict:
    """Exact vs simulated completion probability under tree-uniform sampling."""
    if not isinstance(cfg.sampling, TreeUniform):
        raise Unsupported("the exact value is defined for tree-uniform sampling only")
    exact = exact_completion_probability(prefix, sigma, cfg.spec)
    est, ci = estimate_completion_probability(prefix, sigma, cfg)
    return {
        "exact": exact,
        "estimate": est,
        "ci95": ci,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "pass": abs(est - float(exact)) <= ci + 1e-12,
    }


def empirical_frequencies(cfg: SimConfig) -> dict[str, float]:
    """Per-outcome share over ``cfg.trials`` sampled complete series."""
    totals = np.zeros(cfg.spec.l, dtype=np.int64)
    for rng, size in _chunk_rngs(cfg.seed, cfg.trials):
        totals += _draw_counts(rng, cfg.sampling, cfg.spec, cfg.spec.n, size).sum(axis=0)
    return {p: totals[t] / (cfg.trials * cfg.spec.n) for t, p in enumerate(cfg.spec.alphabet)}

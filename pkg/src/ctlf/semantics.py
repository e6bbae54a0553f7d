"""Target distributions, prefix counting and the closed-form CTLF evaluator.

Every modal operator is evaluated through a *measure*: the best ratio the
operator can certify at a world (or on a path), or ``None`` when the operator
needs a target-compatible witness series and none exists.  A formula
``O_q phi`` holds exactly when the measure exists and is ``>= q``.  Measures
do not depend on ``q``, which is what makes threshold sweeps cheap.

For propositional arguments the existential operators reduce to quota
arithmetic on count vectors.  Nested modal arguments make the truth of the
argument depend on the whole history of a world, so those cases fall back
to a depth-first search over the tree pruned by quota feasibility.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    AlphabetMismatch, CapExceeded, IncompletePath, MissingDistribution,
    PathNotFromRoot, TotalExceedsHorizon, TotalMismatch, UnknownAtom,
)
from .formula import (
    And, Atom, BlackBox, Box, Circ, Dagger, Formula, Nabla, Not, Or,
    StateFormula, Tri, atoms, is_propositional,
)
from .model import (
    DEFAULT_CAP, ModelSpec, Path, WorldId, check_path, check_world,
    children_of, count_paths_from, label_of, path_for_outcomes, root_path,
)


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction or an ``"a/b"`` string. Floats are refused."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


class Distribution:
    """Target frequency ``mu(p)`` for every outcome; frequencies sum to 1."""

    __slots__ = ("_freq",)

    def __init__(self, freq: Mapping[str, object]):
        fr = {p: as_fraction(v) for p, v in freq.items()}
        for p, v in fr.items():
            if not 0 <= v <= 1:
                raise ValueError(f"frequency of {p!r} is {v}, outside [0, 1]")
        if sum(fr.values()) != 1:
            raise ValueError(f"frequencies sum to {sum(fr.values())}, not 1")
        self._freq = MappingProxyType(fr)

    @classmethod
    def uniform(cls, alphabet: Sequence[str]) -> "Distribution":
        return cls({p: Fraction(1, len(alphabet)) for p in alphabet})

    @property
    def freq(self) -> Mapping[str, Fraction]:
        return self._freq

    def __getitem__(self, p: str) -> Fraction:
        return self._freq.get(p, Fraction(0))

    def __iter__(self):
        return iter(self._freq)

    def items(self):
        return self._freq.items()

    def __eq__(self, other):
        return isinstance(other, Distribution) and dict(self._freq) == dict(other._freq)

    def __hash__(self):
        return hash(frozenset(self._freq.items()))

    def __repr__(self):
        body = ", ".join(f"{p}: {v}" for p, v in self._freq.items())
        return f"Distribution({{{body}}})"

    def quotas(self, n: int) -> Optional[dict[str, int]]:
        """``mu(p) * n`` per outcome, or None if any of them is not an integer."""
        out = {}
        for p, v in self._freq.items():
            q = v * n
            if q.denominator != 1:
                return None
            out[p] = q.numerator
        return out

    def check_alphabet(self, alphabet: Iterable[str]) -> None:
        if set(self._freq) != set(alphabet):
            raise AlphabetMismatch(
                f"distribution over {sorted(self._freq)} but alphabet is {sorted(alphabet)}")


class CountVector:
    """Occurrences per outcome; missing outcomes count as zero."""

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[str, int]):
        for p, c in counts.items():
            if c < 0:
                raise ValueError(f"negative count for {p!r}")
        self._counts = MappingProxyType(dict(counts))

    @classmethod
    def of(cls, outcomes: Iterable[str], alphabet: Sequence[str] = ()) -> "CountVector":
        counts = dict.fromkeys(alphabet, 0)
        for o in outcomes:
            counts[o] = counts.get(o, 0) + 1
        return cls(counts)

    @property
    def counts(self) -> Mapping[str, int]:
        return self._counts

    @property
    def total(self) -> int:
        return sum(self._counts.values())

    def __getitem__(self, p: str) -> int:
        return self._counts.get(p, 0)

    def items(self):
        return self._counts.items()

    def add(self, p: str, k: int = 1) -> "CountVector":
        d = dict(self._counts)
        d[p] = d.get(p, 0) + k
        return CountVector(d)

    def __eq__(self, other):
        if not isinstance(other, CountVector):
            return NotImplemented
        keys = set(self._counts) | set(other._counts)
        return all(self[k] == other[k] for k in keys)

    def __hash__(self):
        return hash(frozenset((p, c) for p, c in self._counts.items() if c))

    def __repr__(self):
        return f"CountVector({dict(self._counts)})"


def multinomial(parts: Iterable[int]) -> int:
    """``(sum parts)! / prod(part!)`` as an exact integer."""
    total, out = 0, 1
    for k in parts:
        total += k
        out *= math.comb(total, k)
    return out


def prefix_counts(w, spec: ModelSpec) -> CountVector:
    """Outcome counts along the root path of `w`, `w` included."""
    w = check_world(w, spec)
    if spec.canonical:
        counts = dict.fromkeys(spec.alphabet, 0)
        j = w.index - 1
        for _ in range(w.level):
            counts[spec.alphabet[j % spec.l]] += 1
            j //= spec.l
        return CountVector(counts)
    return CountVector.of((label_of(u, spec) for u in root_path(w, spec)), spec.alphabet)


def is_sigma_compatible(cv: CountVector, sigma: Distribution, n: int) -> bool:
    if cv.total != n:
        raise TotalMismatch(f"counts total {cv.total}, series length {n}")
    return all(Fraction(cv[p]) == sigma[p] * n for p in set(sigma) | set(cv.counts))


def residual_quotas(cv: CountVector, sigma: Distribution, n: int) -> Optional[dict[str, int]]:
    """Occurrences each outcome still needs to end target-compatible, or None if impossible."""
    if cv.total > n:
        raise TotalExceedsHorizon(f"counts total {cv.total} exceed horizon {n}")
    quotas = sigma.quotas(n)
    if quotas is None:
        return None
    if any(c and p not in quotas for p, c in cv.items()):
        return None
    res = {p: q - cv[p] for p, q in quotas.items()}
    if any(r < 0 for r in res.values()):
        return None
    return res


def sigma_completions(cv: CountVector, sigma: Distribution, n: int,
                      spec: Optional[ModelSpec] = None) -> int:
    """Number of target-compatible completions of a prefix with counts `cv`."""
    res = residual_quotas(cv, sigma, n)
    if res is None:
        return 0
    return multinomial(res.values())


def extendable_continuations(cv: CountVector, sigma: Distribution, n: int,
                             alphabet: Sequence[str], steps: int) -> int:
    """Continuations of `steps` outputs after which the prefix is still target-extendable."""
    res = residual_quotas(cv, sigma, n)
    if res is None:
        return 0
    caps = [res.get(p, 0) for p in alphabet]

    def go(k: int, left: int) -> int:
        if k == len(caps) - 1:
            return 1 if left <= caps[k] else 0
        return sum(math.comb(left, r) * go(k + 1, left - r) for r in range(min(left, caps[k]) + 1))

    return go(0, steps)


def _check_atoms(f: Formula, spec: ModelSpec):
    unknown = atoms(f) - set(spec.alphabet)
    if unknown:
        raise UnknownAtom(f"atoms {sorted(unknown)} not in alphabet {list(spec.alphabet)}")


def _satisfying_outcomes(f: StateFormula, alphabet: Sequence[str]) -> frozenset:
    def sat(g, p):
        if isinstance(g, Atom):
            return g.name == p
        if isinstance(g, Not):
            return not sat(g.arg, p)
        if isinstance(g, And):
            return sat(g.left, p) and sat(g.right, p)
        if isinstance(g, Or):
            return sat(g.left, p) or sat(g.right, p)
        raise TypeError("not propositional")

    return frozenset(p for p in alphabet if sat(f, p))


class Checker:
    """Closed-form evaluator bound to one model and target distribution."""

    def __init__(self, spec: ModelSpec, sigma: Optional[Distribution] = None,
                 budget: int = DEFAULT_CAP):
        self.spec = spec
        self.sigma = sigma
        self.budget = budget
        if sigma is not None:
            sigma.check_alphabet(spec.alphabet)
        self.quotas = sigma.quotas(spec.n) if sigma is not None else None
        self._oracle = None
        if not spec.canonical:
            from .oracle import Oracle
            self._oracle = Oracle(spec, sigma, cap=budget)
        self._truth: dict = {}
        self._measure: dict = {}
        self._sets: dict = {}
        self._counts: dict = {}
        self._checked: set = set()

    # -- helpers

    def _need_sigma(self):
        if self.sigma is None:
            raise MissingDistribution("operator needs a target distribution")

    def _outcomes(self, f) -> frozenset:
        s = self._sets.get(f)
        if s is None:
            s = self._sets[f] = _satisfying_outcomes(f, self.spec.alphabet)
        return s

    def _prefix(self, w: WorldId) -> CountVector:
        cv = self._counts.get(w)
        if cv is None:
            cv = self._counts[w] = prefix_counts(w, self.spec)
        return cv

    def _extendable(self, cv: CountVector) -> bool:
        return self.quotas is not None and all(cv[p] <= q for p, q in self.quotas.items())

    def _sat_count(self, w: WorldId, f) -> int:
        if is_propositional(f):
            cv = self._prefix(w)
            return sum(cv[p] for p in self._outcomes(f))
        return sum(self.holds(u, f) for u in root_path(w, self.spec))

    # -- state formulas

    def _validate(self, f):
        if f not in self._checked:
            _check_atoms(f, self.spec)
            self._checked.add(f)

    def holds(self, w, f: StateFormula) -> bool:
        w = check_world(w, self.spec)
        self._validate(f)
        if self._oracle is not None:
            return self._oracle.holds(w, f)
        return self._holds(w, f)

    def _holds(self, w: WorldId, f) -> bool:
        key = (w, f)
        v = self._truth.get(key)
        if v is not None:
            return v
        if isinstance(f, Atom):
            v = label_of(w, self.spec) == f.name
        elif isinstance(f, Not):
            v = not self._holds(w, f.arg)
        elif isinstance(f, And):
            v = self._holds(w, f.left) and self._holds(w, f.right)
        elif isinstance(f, Or):
            v = self._holds(w, f.left) or self._holds(w, f.right)
        else:
            m = self._modal_measure(w, f)
            v = m is not None and m >= f.q
        self._truth[key] = v
        return v

    def measure(self, w, f: StateFormula) -> Optional[Fraction]:
        """Best ratio the outermost modality of `f` certifies at `w`."""
        w = check_world(w, self.spec)
        self._validate(f)
        if self._oracle is not None:
            return self._oracle.measure(w, f)
        if isinstance(f, (Atom, Not, And, Or)):
            return None
        return self._modal_measure(w, f)

    def _modal_measure(self, w: WorldId, f) -> Optional[Fraction]:
        key = (w, type(f), f.arg)
        if key in self._measure:
            return self._measure[key]
        i, n = w.level, self.spec.n
        if isinstance(f, Box):
            m = Fraction(self._sat_count(w, f.arg), i)
        elif isinstance(f, Circ):
            m = Fraction(self._sat_count(w, f.arg), n)
        elif isinstance(f, BlackBox):
            m = self._best_history(i, f.arg)
        elif isinstance(f, Tri):
            m = self._best_future(w, f.arg)
        else:
            raise TypeError(f"{type(f).__name__} is not a state modality")
        self._measure[key] = m
        return m

    def _best_history(self, i: int, arg) -> Optional[Fraction]:
        self._need_sigma()
        key = ("bbox", i, arg)
        if key in self._measure:
            return self._measure[key]
        if self.quotas is None:
            m = None
        elif is_propositional(arg):
            on_target = sum(self.quotas[p] for p in self._outcomes(arg))
            m = Fraction(min(i, on_target), i)
        else:
            best = self._search_history(i, arg)
            m = None if best is None else Fraction(best, i)
        self._measure[key] = m
        return m

    def _search_history(self, level: int, arg) -> Optional[int]:
        best = None
        visited = 0
        stack = [(r, self._prefix(r), self._holds(r, arg)) for r in self.spec.worlds(1)]
        while stack:
            w, cv, sat = stack.pop()
            if not self._extendable(cv):
                continue
            visited += 1
            if visited > self.budget:
                raise CapExceeded(visited, self.budget)
            if w.level == level:
                best = sat if best is None else max(best, sat)
                continue
            for c in children_of(w, self.spec):
                ccv = cv.add(label_of(c, self.spec))
                stack.append((c, ccv, sat + self._holds(c, arg)))
        return best

    def _best_future(self, w: WorldId, arg) -> Optional[Fraction]:
        self._need_sigma()
        i, n = w.level, self.spec.n
        cv = self._prefix(w)
        if i == n or not self._extendable(cv):
            return None
        if is_propositional(arg):
            return Fraction(sum(self.quotas[p] - cv[p] for p in self._outcomes(arg)), n - i)
        best = self._search_future(w, cv, arg)
        return None if best is None else Fraction(best, n - i)

    def _search_future(self, w: WorldId, cv: CountVector, arg) -> Optional[int]:
        visited = [0]

        def best_from(u: WorldId, ucv: CountVector) -> Optional[int]:
            visited[0] += 1
            if visited[0] > self.budget:
                raise CapExceeded(visited[0], self.budget)
            here = int(self._holds(u, arg))
            if u.level == self.spec.n:
                return here
            tails = [best_from(c, ccv) for c, ccv in self._extendable_children(u, ucv)]
            tails = [t for t in tails if t is not None]
            return here + max(tails) if tails else None

        tails = [best_from(c, ccv) for c, ccv in self._extendable_children(w, cv)]
        tails = [t for t in tails if t is not None]
        return max(tails) if tails else None

    def _extendable_children(self, w: WorldId, cv: CountVector):
        for c in children_of(w, self.spec):
            ccv = cv.add(label_of(c, self.spec))
            if self._extendable(ccv):
                yield c, ccv

    # -- path formulas

    def holds_path(self, p: Path, f) -> bool:
        m = self.path_measure(p, f)
        return m is not None and m >= f.q

    def path_measure(self, p: Path, f) -> Optional[Fraction]:
        p = check_path(p if isinstance(p, Path) else Path(tuple(p)), self.spec)
        _check_atoms(f, self.spec)
        if self._oracle is not None:
            return self._oracle.path_measure(p, f)
        if isinstance(f, Nabla):
            if not p.is_complete(self.spec):
                raise IncompletePath(f"NAB needs a complete path, got {p.start}..{p.end}")
            return Fraction(sum(self._holds(u, f.arg) for u in p), self.spec.n)
        if isinstance(f, Dagger):
            if p.start.level != 1:
                raise PathNotFromRoot(f"DAG needs a prefix starting at level 1, got {p.start}")
            self._need_sigma()
            done = sigma_completions(self._prefix(p.end), self.sigma, self.spec.n)
            if done == 0:
                return None
            return Fraction(done, count_paths_from(p.end, self.spec))
        raise TypeError(f"{type(f).__name__} is not a path formula")

    # -- witnesses

    def _complete(self, w: WorldId) -> Path:
        cv = self._prefix(w)
        labels = [label_of(u, self.spec) for u in root_path(w, self.spec)]
        for p in self.spec.alphabet:
            labels += [p] * (self.quotas[p] - cv[p])
        return path_for_outcomes(labels, self.spec)

    def witness(self, w, f: StateFormula) -> Optional[Path]:
        """A target-compatible complete path certifying BBOX/TRI at `w`, if any."""
        w = check_world(w, self.spec)
        if not self.spec.canonical or not isinstance(f, (BlackBox, Tri)):
            return None
        m = self.measure(w, f)
        if m is None or m < f.q:
            return None
        i = w.level
        if isinstance(f, BlackBox):
            target = m * i
            for u in self._extendable_level(i):
                if self._sat_count(u, f.arg) == target:
                    return self._complete(u)
            return None
        target = m * (self.spec.n - i)
        for leaf in self._extendable_leaves(w):
            tail = root_path(leaf, self.spec).worlds[i:]
            if sum(self._holds(u, f.arg) for u in tail) == target:
                return root_path(leaf, self.spec)
        return None

    def path_witness(self, p: Path, f) -> Optional[Path]:
        if isinstance(f, Dagger) and self.spec.canonical and self.holds_path(p, f):
            return self._complete(p.end)
        return None

    def _extendable_level(self, level: int):
        stack = list(self.spec.worlds(1))
        while stack:
            u = stack.pop()
            if not self._extendable(self._prefix(u)):
                continue
            if u.level == level:
                yield u
            else:
                stack.extend(reversed(children_of(u, self.spec)))

    def _extendable_leaves(self, w: WorldId):
        stack = [(w, self._prefix(w))]
        while stack:
            u, cv = stack.pop()
            if u.level == self.spec.n:
                yield u
                continue
            stack.extend(reversed(list(self._extendable_children(u, cv))))


@lru_cache(maxsize=64)
def checker_for(spec: ModelSpec, sigma: Optional[Distribution] = None) -> Checker:
    return Checker(spec, sigma)


def eval_state(w, f: StateFormula, spec: ModelSpec, sigma: Optional[Distribution] = None) -> bool:
    return checker_for(spec, sigma).holds(w, f)


def eval_path(p: Path, f, spec: ModelSpec, sigma: Optional[Distribution] = None) -> bool:
    return checker_for(spec, sigma).holds_path(p, f)

"""Brute-force CTLF evaluator over the explicitly enumerated model.

Nothing here reuses the counting shortcuts of :mod:`ctlf.semantics`.  The set
of complete paths is enumerated, the target-compatible subset is obtained by
checking every path's label frequencies against the distribution, the
backward closure of each world is read off the enumerated paths, and each
operator is decided by direct quantification over those sets.  It is meant
as a reference for small models.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import IncompletePath, InvalidPath, MissingDistribution, PathNotFromRoot, UnknownAtom
from .formula import And, Atom, BlackBox, Box, Circ, Dagger, Nabla, Not, Or, Tri, atoms
from .model import DEFAULT_CAP, ModelSpec, Path, WorldId, enumerate_complete_paths, label_of


class Oracle:
    def __init__(self, spec: ModelSpec, sigma=None, cap: int = DEFAULT_CAP):
        self.spec = spec
        self.sigma = sigma
        self.paths: list[tuple[WorldId, ...]] = [p.worlds for p in enumerate_complete_paths(spec, cap)]
        self.label: dict[WorldId, str] = {}
        self.ancestors: dict[WorldId, frozenset] = {}
        self.through: dict[WorldId, list[tuple[int, int]]] = defaultdict(list)
        for k, path in enumerate(self.paths):
            for pos, w in enumerate(path):
                if w not in self.label:
                    self.label[w] = label_of(w, spec)
                    self.ancestors[w] = frozenset(path[:pos + 1])
                self.through[w].append((k, pos))
        self.sigma_paths: Optional[list[int]] = None
        if sigma is not None:
            self.sigma_paths = [k for k, path in enumerate(self.paths) if self._compatible(path)]
        self._sigma_set = frozenset(self.sigma_paths or ())
        self._path_set = frozenset(self.paths)
        self._tables: dict = {}

    def _compatible(self, path) -> bool:
        n = len(path)
        for p in self.spec.alphabet:
            hits = sum(1 for w in path if self.label[w] == p)
            if Fraction(hits, n) != self.sigma[p]:
                return False
        return True

    def _need_sigma(self):
        if self.sigma_paths is None:
            raise MissingDistribution("operator needs a target distribution")

    def table(self, f) -> dict[WorldId, bool]:
        """Truth value of state formula `f` at every world."""
        t = self._tables.get(f)
        if t is not None:
            return t
        worlds = self.label.keys()
        if isinstance(f, Atom):
            if f.name not in self.spec.alphabet:
                raise UnknownAtom(f.name)
            t = {w: self.label[w] == f.name for w in worlds}
        elif isinstance(f, Not):
            a = self.table(f.arg)
            t = {w: not a[w] for w in worlds}
        elif isinstance(f, And):
            a, b = self.table(f.left), self.table(f.right)
            t = {w: a[w] and b[w] for w in worlds}
        elif isinstance(f, Or):
            a, b = self.table(f.left), self.table(f.right)
            t = {w: a[w] or b[w] for w in worlds}
        else:
            m = self.measures(type(f), f.arg)
            t = {w: m[w] is not None and m[w] >= f.q for w in worlds}
        self._tables[f] = t
        return t

    def measures(self, op, arg) -> dict[WorldId, Optional[Fraction]]:
        key = (op, arg)
        if key in self._tables:
            return self._tables[key]
        inner = self.table(arg)
        out: dict[WorldId, Optional[Fraction]] = {}
        if op is Box:
            for w, anc in self.ancestors.items():
                out[w] = Fraction(sum(inner[u] for u in anc), len(anc))
        elif op is Circ:
            for w, anc in self.ancestors.items():
                sat = sum(inner[u] for u in anc)
                out[w] = max(Fraction(sat, len(self.paths[k])) for k, _ in self.through[w])
        elif op is BlackBox:
            self._need_sigma()
            best_at_level: dict[int, Fraction] = {}
            for k in self.sigma_paths:
                for u in self.paths[k]:
                    anc = self.ancestors[u]
                    r = Fraction(sum(inner[v] for v in anc), len(anc))
                    if u.level not in best_at_level or r > best_at_level[u.level]:
                        best_at_level[u.level] = r
            for w in self.label:
                out[w] = best_at_level.get(w.level)
        elif op is Tri:
            self._need_sigma()
            out = dict.fromkeys(self.label)
            for k in self.sigma_paths:
                path = self.paths[k]
                for pos in range(len(path) - 1):
                    rest = path[pos + 1:]
                    r = Fraction(sum(inner[v] for v in rest), len(rest))
                    w = path[pos]
                    if out[w] is None or r > out[w]:
                        out[w] = r
        else:
            raise TypeError(f"{op.__name__} is not a state modality")
        self._tables[key] = out
        return out

    def holds(self, w, f) -> bool:
        return self.table(f)[WorldId(*w)]

    def measure(self, w, f) -> Optional[Fraction]:
        if isinstance(f, (Atom, Not, And, Or)):
            self.table(f)
            return None
        return self.measures(type(f), f.arg)[WorldId(*w)]

    def _matching(self, prefix: tuple) -> list[int]:
        k = len(prefix)
        return [idx for idx, path in enumerate(self.paths) if path[:k] == prefix]

    def path_measure(self, p: Path, f) -> Optional[Fraction]:
        worlds = tuple(p)
        if isinstance(f, Nabla):
            if len(worlds) != self.spec.n or worlds not in self._path_set:
                raise IncompletePath(f"not a complete path: {p}")
            inner = self.table(f.arg)
            return Fraction(sum(inner[u] for u in worlds), len(worlds))
        if isinstance(f, Dagger):
            if worlds[0].level != 1:
                raise PathNotFromRoot(f"prefix starts at level {worlds[0].level}")
            self._need_sigma()
            self.table(f.arg)
            every = self._matching(worlds)
            if not every:
                raise InvalidPath(f"{p} is not a prefix of any complete path")
            good = [k for k in every if k in self._sigma_set]
            inner = self.table(f.arg)
            witnessed = False
            for k in good:
                full = self.paths[k]
                frac = Fraction(sum(inner[u] for u in full), len(full))
                inner_q = self.sigma[f.arg.name] if isinstance(f.arg, Atom) else frac
                if frac >= inner_q:
                    witnessed = True
                    break
            if not witnessed:
                return None
            return Fraction(len(good), len(every))
        raise TypeError(f"{type(f).__name__} is not a path formula")

    def holds_path(self, p: Path, f) -> bool:
        m = self.path_measure(p, f)
        return m is not None and m >= f.q


@lru_cache(maxsize=32)
def oracle_for(spec: ModelSpec, sigma=None) -> Oracle:
    return Oracle(spec, sigma)


def _validate(f, spec):
    unknown = atoms(f) - set(spec.alphabet)
    if unknown:
        raise UnknownAtom(f"atoms {sorted(unknown)} not in alphabet {list(spec.alphabet)}")


def eval_state_oracle(w, f, spec: ModelSpec, sigma=None) -> bool:
    _validate(f, spec)
    return oracle_for(spec, sigma).holds(w, f)


def eval_path_oracle(p: Path, f, spec: ModelSpec, sigma=None) -> bool:
    _validate(f, spec)
    return oracle_for(spec, sigma).holds_path(p, f)

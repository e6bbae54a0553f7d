"""Implicit counting-world trees.

A model with ``l`` outcomes per event and ``n`` events per series has
``l**i`` worlds at level ``i`` (1-based), addressed ``(i, j)`` with
``1 <= j <= l**i``.  The parent of ``(i, j)`` is ``(i - 1, ceil(j / l))`` and
its children are ``(i + 1, (j - 1) * l + t)`` for ``t = 1..l``.  Nothing is
materialized; the tree exists only through this index arithmetic, so every
closed-form operation works for any ``n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .errors import CapExceeded, InvalidPath, InvalidWorld, UnknownOutcome

DEFAULT_CAP = 2 ** 20


class WorldId(NamedTuple):
    level: int
    index: int

    def __str__(self) -> str:
        return f"{self.level}.{self.index}"

    @classmethod
    def parse(cls, text: str) -> "WorldId":
        try:
            i, j = text.strip().split(".")
            return cls(int(i), int(j))
        except ValueError:
            raise InvalidWorld(f"world must be written i.j, got {text!r}") from None


class ExplicitLabeling:
    """Per-world labels given as a table (enumeration-scale models only)."""

    def __init__(self, table: Mapping):
        self._table = {(WorldId.parse(k) if isinstance(k, str) else WorldId(*k)): v
                       for k, v in table.items()}
        self._key = tuple(sorted(self._table.items()))

    def __call__(self, w: WorldId) -> str:
        try:
            return self._table[w]
        except KeyError:
            raise InvalidWorld(f"no label for world {w}") from None

    def __eq__(self, other):
        return isinstance(other, ExplicitLabeling) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def as_dict(self) -> dict[str, str]:
        return {str(w): v for w, v in self._table.items()}


@dataclass(frozen=True)
class ModelSpec:
    """Tree shape plus valuation.

    ``labeler`` is ``None`` for the canonical sibling labeling, in which the
    ``t``-th child of every world carries ``alphabet[t - 1]``.  Any other
    callable ``WorldId -> outcome`` is accepted but the closed-form
    evaluators then fall back to enumeration.
    """

    l: int
    n: int
    alphabet: tuple[str, ...]
    labeler: Optional[Callable[[WorldId], str]] = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.l < 1 or self.n < 1:
            raise ValueError("l and n must be positive")
        if len(self.alphabet) != self.l:
            raise ValueError(f"alphabet has {len(self.alphabet)} entries, l = {self.l}")
        if len(set(self.alphabet)) != self.l:
            raise ValueError("alphabet entries must be distinct")

    @classmethod
    def of(cls, alphabet: Sequence[str], n: int, labeler=None) -> "ModelSpec":
        return cls(len(alphabet), n, tuple(alphabet), labeler)

    @property
    def canonical(self) -> bool:
        return self.labeler is None

    @property
    def leaf_count(self) -> int:
        return self.l ** self.n

    @property
    def world_count(self) -> int:
        return sum(self.l ** i for i in range(1, self.n + 1))

    def level_size(self, i: int) -> int:
        return self.l ** i

    def worlds(self, level: Optional[int] = None) -> Iterator[WorldId]:
        levels = [level] if level is not None else range(1, self.n + 1)
        for i in levels:
            for j in range(1, self.l ** i + 1):
                yield WorldId(i, j)


@dataclass(frozen=True)
class Path:
    worlds: tuple[WorldId, ...]

    def __post_init__(self):
        ws = tuple(WorldId(*w) for w in self.worlds)
        object.__setattr__(self, "worlds", ws)
        if not ws:
            raise InvalidPath("a path needs at least one world")

    @property
    def start(self) -> WorldId:
        return self.worlds[0]

    @property
    def end(self) -> WorldId:
        return self.worlds[-1]

    def __len__(self):
        return len(self.worlds)

    def __iter__(self):
        return iter(self.worlds)

    def __getitem__(self, k):
        return self.worlds[k]

    def __str__(self):
        return ",".join(map(str, self.worlds))

    def is_complete(self, spec: ModelSpec) -> bool:
        return self.start.level == 1 and self.end.level == spec.n


def check_world(w, spec: ModelSpec) -> WorldId:
    w = WorldId(*w)
    if not 1 <= w.level <= spec.n:
        raise InvalidWorld(f"level {w.level} outside 1..{spec.n}")
    if not 1 <= w.index <= spec.l ** w.level:
        raise InvalidWorld(f"index {w.index} outside 1..{spec.l ** w.level} at level {w.level}")
    return w


def check_path(p: Path, spec: ModelSpec) -> Path:
    """Validate that consecutive worlds are parent and child."""
    for w in p:
        check_world(w, spec)
    for a, b in zip(p.worlds, p.worlds[1:]):
        if b.level != a.level + 1 or -(-b.index // spec.l) != a.index:
            raise InvalidPath(f"{b} is not a direct child of {a}")
    return p


def parent_of(w, spec: ModelSpec) -> WorldId:
    i, j = check_world(w, spec)
    if i == 1:
        return WorldId(i, j)
    return WorldId(i - 1, -(-j // spec.l))


def children_of(w, spec: ModelSpec) -> list[WorldId]:
    i, j = check_world(w, spec)
    if i == spec.n:
        return []
    h = (j - 1) * spec.l
    return [WorldId(i + 1, h + t) for t in range(1, spec.l + 1)]


def root_path(w, spec: ModelSpec) -> Path:
    w = check_world(w, spec)
    chain = [w]
    while chain[-1].level > 1:
        i, j = chain[-1]
        chain.append(WorldId(i - 1, -(-j // spec.l)))
    return Path(tuple(reversed(chain)))


def count_paths_from(w, spec: ModelSpec) -> int:
    w = check_world(w, spec)
    return spec.l ** (spec.n - w.level)


def label_of(w, spec: ModelSpec) -> str:
    w = check_world(w, spec)
    if spec.labeler is not None:
        return spec.labeler(w)
    return spec.alphabet[(w.index - 1) % spec.l]


def world_for_outcomes(outcomes: Sequence[str], spec: ModelSpec) -> WorldId:
    """The world whose root path is labeled `outcomes` (canonical labeling)."""
    if not outcomes:
        raise InvalidWorld("empty outcome sequence has no world")
    if len(outcomes) > spec.n:
        raise InvalidWorld(f"{len(outcomes)} outcomes exceed series length {spec.n}")
    pos = {p: t for t, p in enumerate(spec.alphabet)}
    j = 0
    for o in outcomes:
        if o not in pos:
            raise UnknownOutcome(f"{o!r} not in alphabet {spec.alphabet}")
        j = j * spec.l + pos[o]
    return WorldId(len(outcomes), j + 1)


def path_for_outcomes(outcomes: Sequence[str], spec: ModelSpec) -> Path:
    return root_path(world_for_outcomes(outcomes, spec), spec)


def path_labels(p: Path, spec: ModelSpec) -> list[str]:
    return [label_of(w, spec) for w in p]


def enumerate_complete_paths(spec: ModelSpec, cap: int = DEFAULT_CAP) -> Iterator[Path]:
    """Yield every root-to-leaf path, in lexicographic order of child offsets."""
    total = spec.l ** spec.n
    if total > cap:
        raise CapExceeded(total, cap)
    for offsets in itertools.product(range(spec.l), repeat=spec.n):
        worlds = []
        j = 0
        for i, t in enumerate(offsets, start=1):
            j = j * spec.l + t
            worlds.append(WorldId(i, j + 1))
        yield check_path(Path(tuple(worlds)), spec)


def to_dot(spec: ModelSpec, cap: int = 2 ** 10) -> str:
    """Graphviz dump of the explicit tree; debugging aid only."""
    if spec.world_count > cap:
        raise CapExceeded(spec.world_count, cap)
    lines = ["digraph ctlf {", "  rankdir=LR;"]
    for w in spec.worlds():
        lines.append(f'  "{w}" [label="w{w}\\n{label_of(w, spec)}"];')
        for c in children_of(w, spec):
            lines.append(f'  "{w}" -> "{c}";')
    lines.append("}")
    return "\n".join(lines)

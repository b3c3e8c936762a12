"""Point maps between finite spaces and checks of (descriptive) proximal continuity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .descriptive import DescriptiveSpace
from .errors import (
    CompositionMismatch,
    Disagreement,
    InputError,
    MissingProbe,
    NotACover,
    NotClosed,
)
from .space_core import COMPARE_TOL, EXHAUSTIVE_LIMIT, FiniteSpace, iter_bits

MODES = ("spatial", "descriptive")


def relation_space(space, mode: str):
    """The object carrying the relation used in ``mode`` (both expose ``near_masks``)."""
    if mode == "spatial":
        return space.base if isinstance(space, DescriptiveSpace) else space
    if mode == "descriptive":
        if not isinstance(space, DescriptiveSpace):
            raise MissingProbe("descriptive mode needs a space with probe vectors")
        return space
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def _base(space) -> FiniteSpace:
    return space.base if isinstance(space, DescriptiveSpace) else space


@dataclass(frozen=True, eq=False)
class SpaceMap:
    source: FiniteSpace | DescriptiveSpace
    target: FiniteSpace | DescriptiveSpace
    assignment: Mapping[int, int]

    def __post_init__(self):
        assignment = {int(k): int(v) for k, v in dict(self.assignment).items()}
        src, tgt = _base(self.source), _base(self.target)
        missing = [pid for pid in src.ids if pid not in assignment]
        if missing:
            raise InputError(f"map is not total: no image for {missing}")
        extra = sorted(set(assignment) - src.carrier)
        if extra:
            raise InputError(f"map assigns ids {extra} outside its source")
        bad = sorted({v for v in assignment.values() if v not in tgt.index})
        if bad:
            raise InputError(f"images {bad} are not points of the target")
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def identity(cls, space) -> "SpaceMap":
        return cls(space, space, {pid: pid for pid in space.ids})

    @classmethod
    def constant(cls, source, target, value: int) -> "SpaceMap":
        return cls(source, target, {pid: value for pid in source.ids})

    def __call__(self, pid: int) -> int:
        return self.assignment[pid]

    def image(self, subset) -> frozenset:
        return frozenset(self.assignment[pid] for pid in subset)

    def same_function(self, other: "SpaceMap") -> bool:
        return self.assignment == other.assignment

    def __eq__(self, other):
        if not isinstance(other, SpaceMap):
            return NotImplemented
        return self.assignment == other.assignment and self.source == other.source and self.target == other.target

    def restrict(self, subset) -> "SpaceMap":
        sub = self.source.restrict(subset)
        return SpaceMap(sub, self.target, {pid: self.assignment[pid] for pid in sub.ids})


@dataclass
class ContinuityWitness:
    verdict: bool
    counterexample: tuple[frozenset, frozenset] | None = None
    checked: int = 0
    method: str = "exhaustive"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == (self.counterexample is not None):
            raise ValueError("a failing verdict needs a counterexample and a passing one none")

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        ce = None
        if self.counterexample is not None:
            ce = [sorted(s) for s in self.counterexample]
        return {
            "verdict": self.verdict,
            "counterexample": ce,
            "checked": self.checked,
            "method": self.method,
            "params": dict(sorted(self.params.items())),
        }


def _popcount_order(size: int) -> list[int]:
    return sorted(range(1, size), key=lambda m: (bin(m).count("1"), m))


def check_continuity(
    f: SpaceMap,
    mode: str = "spatial",
    trials: int = 2000,
    seed: int = 0,
    exhaustive: bool | None = None,
) -> ContinuityWitness:
    """Check ``A near B  =>  f(A) near f(B)`` over subsets of the source.

    Exhaustive over every ordered pair of nonempty subsets when the source has
    at most ``EXHAUSTIVE_LIMIT`` points; otherwise every pair of singletons
    plus ``trials`` random subset pairs drawn with ``seed``.
    """
    src = relation_space(f.source, mode)
    tgt = relation_space(f.target, mode)
    n = len(src.ids)
    tindex = _base(tgt).index if isinstance(tgt, DescriptiveSpace) else tgt.index
    image_bit = [1 << tindex[f.assignment[pid]] for pid in src.ids]
    adj = src.adjacency
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT
    checked = 0

    def fail(ma, mb, method):
        ce = (src.subset_of(ma), src.subset_of(mb))
        return ContinuityWitness(False, ce, checked, method, {"mode": mode})

    if exhaustive:
        size = 1 << n
        img = [0] * size
        nbr = [0] * size
        for m in range(1, size):
            low = m & -m
            i = low.bit_length() - 1
            img[m] = img[m ^ low] | image_bit[i]
            nbr[m] = nbr[m ^ low] | adj[i]
        timg_nbr = {}
        order = _popcount_order(size)
        for a in order:
            na = nbr[a]
            ia = img[a]
            tn = timg_nbr.get(ia)
            if tn is None:
                tn = timg_nbr[ia] = tgt.neighbourhood_mask(ia)
            for b in order:
                if na & b:
                    checked += 1
                    if not tn & img[b]:
                        return fail(a, b, "exhaustive")
        return ContinuityWitness(True, None, checked, "exhaustive", {"mode": mode})

    def image_mask(m):
        out = 0
        for i in iter_bits(m):
            out |= image_bit[i]
        return out

    for i in range(n):
        for j in range(n):
            if adj[i] >> j & 1:
                checked += 1
                if not tgt.near_masks(image_bit[i], image_bit[j]):
                    return fail(1 << i, 1 << j, "sampled")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        rows = rng.random((2, n)) < 0.5
        a = sum(1 << int(i) for i in np.flatnonzero(rows[0]))
        b = sum(1 << int(i) for i in np.flatnonzero(rows[1]))
        if src.near_masks(a, b):
            checked += 1
            if not tgt.near_masks(image_mask(a), image_mask(b)):
                return fail(a, b, "sampled")
    return ContinuityWitness(True, None, checked, "sampled", {"mode": mode, "seed": seed, "trials": trials})


def is_proximally_continuous(f: SpaceMap, trials: int = 2000, seed: int = 0, exhaustive=None) -> ContinuityWitness:
    return check_continuity(f, "spatial", trials, seed, exhaustive)


def is_dpc(f: SpaceMap, trials: int = 2000, seed: int = 0, exhaustive=None) -> ContinuityWitness:
    """Descriptive proximal continuity: descriptively near sets keep near images."""
    return check_continuity(f, "descriptive", trials, seed, exhaustive)


def compose(f: SpaceMap, g: SpaceMap) -> SpaceMap:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise CompositionMismatch("target of the first map differs from the source of the second")
    return SpaceMap(f.source, g.target, {x: g.assignment[y] for x, y in f.assignment.items()})


def glue(f: SpaceMap, g: SpaceMap, a, b, mode: str = "spatial", space=None) -> SpaceMap:
    """Combine ``f`` on ``a`` with ``g`` on ``b`` into one map on ``a | b``.

    ``a`` and ``b`` must cover the space and be closed (descriptively closed in
    descriptive mode); ``f`` and ``g`` must agree on the overlap.
    """
    space = f.source if space is None else space
    rel = relation_space(space, mode)
    a, b = space.subset(a), space.subset(b)
    if a | b != space.carrier:
        raise NotACover(f"subsets miss points {sorted(space.carrier - (a | b))}")
    if f.target != g.target:
        raise CompositionMismatch("glued maps must share a target")
    for name, part, m in (("A", a, f), ("B", b, g)):
        outside = part - set(m.assignment)
        if outside:
            raise InputError(f"map for {name} is undefined on {sorted(outside)}")
        closure = rel.subset_of(rel.neighbourhood_mask(rel.mask_of(part)))
        if closure != part:
            raise NotClosed(name, closure - part)
    for pid in space.ids:
        if pid in a and pid in b and f(pid) != g(pid):
            raise Disagreement(pid)
    return SpaceMap(space, f.target, {pid: f(pid) if pid in a else g(pid) for pid in space.ids})


class DegenerateVerdict(NamedTuple):
    degenerate: bool
    ordinary: bool

    def __bool__(self) -> bool:
        return self.degenerate


def is_degenerate_descriptive_constant(d: SpaceMap) -> DegenerateVerdict:
    """Whether every image point of ``d`` has the same description.

    With ``eps_desc > 0`` "the same" means all image descriptions lie pairwise
    within ``eps_desc`` of each other.
    """
    if not isinstance(d.target, DescriptiveSpace):
        raise MissingProbe("the target of a degenerate descriptive constant map needs probe vectors")
    image = frozenset(d.assignment.values())
    diameter = d.target.description_diameter(image)
    return DegenerateVerdict(diameter <= d.target.eps_desc + COMPARE_TOL, len(image) == 1)

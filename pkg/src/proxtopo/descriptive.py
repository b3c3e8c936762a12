"""Descriptive proximity: nearness through feature-vector descriptions.

Every point carries a probe vector.  Two sets are descriptively near when
some description of one lies within ``eps_desc`` of some description of the
other; with ``eps_desc == 0`` that is plain overlap of the description sets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptySet, InputError, InvalidPoint, MissingProbe
from .space_core import (
    COMPARE_TOL,
    AxiomReport,
    FiniteSpace,
    Point,
    Relation,
    check_axioms,
    near_table,
    iter_bits,
)


@dataclass(frozen=True)
class ProbeTable:
    dim: int
    features: Mapping[int, tuple[float, ...]]

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("probe dimension must be positive")
        clean = {}
        for pid, vec in self.features.items():
            vec = tuple(float(v) for v in vec)
            if len(vec) != self.dim:
                raise InputError(f"probe vector of point {pid} has length {len(vec)}, expected {self.dim}")
            if not all(math.isfinite(v) for v in vec):
                raise InputError(f"probe vector of point {pid} is not finite")
            clean[int(pid)] = vec
        object.__setattr__(self, "features", clean)


@dataclass(frozen=True)
class DescriptionSet:
    """Distinct descriptions of a set, deduplicated greedily under ``eps``."""

    vectors: tuple[tuple[float, ...], ...]
    eps: float = 0.0

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[float]], eps: float = 0.0) -> "DescriptionSet":
        kept: list[tuple[float, ...]] = []
        for vec in vectors:
            vec = tuple(float(v) for v in vec)
            if not any(_dist(vec, k) <= eps + COMPARE_TOL for k in kept):
                kept.append(vec)
        return cls(tuple(kept), eps)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __contains__(self, vec) -> bool:
        return any(_dist(tuple(vec), k) <= self.eps + COMPARE_TOL for k in self.vectors)


def _dist(u, v) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(u, v)))


@dataclass(frozen=True)
class DescriptiveSpace:
    """A finite space whose points carry probe vectors."""

    base: FiniteSpace
    probes: ProbeTable
    eps_desc: float = 0.0

    def __post_init__(self):
        missing = set(self.base.ids) - set(self.probes.features)
        if missing:
            raise MissingProbe(f"points {sorted(missing)} have no probe vector")
        extra = set(self.probes.features) - set(self.base.ids)
        if extra:
            raise InputError(f"probe table describes unknown points {sorted(extra)}")
        eps = float(self.eps_desc)
        if not (eps >= 0 and math.isfinite(eps)):
            raise InputError(f"eps_desc must be a finite nonnegative real, got {eps}")
        object.__setattr__(self, "eps_desc", eps)

    @classmethod
    def from_table(cls, coords, features, eps_spatial=0.0, eps_desc=0.0, ids=None) -> "DescriptiveSpace":
        """Build a space from parallel sequences of coordinates and feature vectors."""
        base = FiniteSpace.from_coords(coords, eps_spatial, ids)
        feats = [tuple(np.atleast_1d(np.asarray(f, dtype=float))) for f in features]
        table = ProbeTable(len(feats[0]), dict(zip(base.ids, feats)))
        return cls(base, table, eps_desc)

    # delegation to the carrier

    def __len__(self) -> int:
        return len(self.base)

    @property
    def points(self) -> tuple[Point, ...]:
        return self.base.points

    @property
    def ids(self) -> tuple[int, ...]:
        return self.base.ids

    @property
    def carrier(self) -> frozenset:
        return self.base.carrier

    @property
    def eps_spatial(self) -> float:
        return self.base.eps_spatial

    def mask_of(self, subset) -> int:
        return self.base.mask_of(subset)

    def subset_of(self, mask: int) -> frozenset:
        return self.base.subset_of(mask)

    def subset(self, ids) -> frozenset:
        return self.base.subset(ids)

    def near(self, a, b) -> bool:
        return self.base.near(a, b)

    def restrict(self, subset) -> "DescriptiveSpace":
        base = self.base.restrict(subset)
        feats = {pid: self.probes.features[pid] for pid in base.ids}
        return DescriptiveSpace(base, ProbeTable(self.probes.dim, feats), self.eps_desc)

    # descriptive structure

    @cached_property
    def feature_matrix(self) -> np.ndarray:
        return np.array([self.probes.features[pid] for pid in self.base.ids], dtype=float)

    @cached_property
    def feature_distances(self) -> np.ndarray:
        f = self.feature_matrix
        diff = f[:, None, :] - f[None, :, :]
        return np.sqrt((diff ** 2).sum(axis=-1))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Per point, the bitmask of points whose description matches within ``eps_desc``."""
        close = self.feature_distances <= self.eps_desc + COMPARE_TOL
        return tuple(sum(1 << int(j) for j in np.flatnonzero(row)) for row in close)

    def describe(self, pid) -> tuple[float, ...]:
        try:
            return self.probes.features[pid]
        except KeyError:
            raise InvalidPoint(f"unknown point id {pid!r}") from None

    def neighbourhood_mask(self, mask: int) -> int:
        adj = self.adjacency
        out = 0
        for i in iter_bits(mask):
            out |= adj[i]
        return out

    def description_set(self, a) -> DescriptionSet:
        ma = self.mask_of(a)
        if not ma:
            raise EmptySet("the empty set has no description")
        ids = self.base.ids
        return DescriptionSet.from_vectors((self.probes.features[ids[i]] for i in iter_bits(ma)), self.eps_desc)

    def description_diameter(self, a) -> float:
        """Largest feature distance between two members of ``a`` (0 for singletons)."""
        idx = list(iter_bits(self.mask_of(a)))
        if not idx:
            raise EmptySet("the empty set has no description")
        return float(self.feature_distances[np.ix_(idx, idx)].max())

    def near_masks(self, ma: int, mb: int) -> bool:
        return bool(ma and mb and self.neighbourhood_mask(ma) & mb)

    def descriptively_near(self, a, b) -> bool:
        return self.near_masks(self.mask_of(a), self.mask_of(b))

    def intersection_mask(self, ma: int, mb: int) -> int:
        adj = self.adjacency
        out = 0
        for i in iter_bits(ma | mb):
            if adj[i] & ma and adj[i] & mb:
                out |= 1 << i
        return out

    def descriptive_intersection(self, a, b) -> frozenset:
        """Points of ``a | b`` whose description occurs in both description sets."""
        return self.subset_of(self.intersection_mask(self.mask_of(a), self.mask_of(b)))

    def multi_intersection(self, sets: Sequence) -> frozenset:
        """Points of the union whose description matches every member of ``sets``."""
        masks = [self.mask_of(s) for s in sets]
        if not masks:
            return frozenset()
        union = 0
        for m in masks:
            union |= m
        adj = self.adjacency
        out = 0
        for i in iter_bits(union):
            if all(adj[i] & m for m in masks):
                out |= 1 << i
        return self.subset_of(out)

    def descriptive_closure(self, a) -> frozenset:
        ma = self.mask_of(a)
        if not ma:
            raise EmptySet("descriptive closure of the empty set is undefined here")
        return self.subset_of(self.neighbourhood_mask(ma))

    def is_descriptively_closed(self, a) -> bool:
        ma = self.mask_of(a)
        return self.neighbourhood_mask(ma) == ma

    def descriptive_ball(self, pid, eps: float) -> frozenset:
        """Open ball ``{y : |phi(x) - phi(y)| < eps}`` around point ``pid``."""
        if eps <= 0:
            raise ValueError("ball radius must be positive")
        try:
            row = self.feature_distances[self.base.index[pid]]
        except KeyError:
            raise InvalidPoint(f"unknown point id {pid!r}") from None
        ids = self.base.ids
        return frozenset(ids[j] for j in np.flatnonzero(row < eps))


def open_descriptive_cover(space: DescriptiveSpace, eps: float):
    """The cover of ``space`` by descriptive ``eps``-balls, one per point (duplicates dropped)."""
    from .nerves import Cover

    balls: list[frozenset] = []
    for pid in space.ids:
        ball = space.descriptive_ball(pid, eps)
        if ball not in balls:
            balls.append(ball)
    return Cover(tuple(balls), space.carrier, space=space)


@dataclass(frozen=True)
class ProductSpace(DescriptiveSpace):
    """Cartesian product of descriptive spaces.

    The inherited ``descriptively_near`` compares concatenated feature vectors;
    ``product_near`` is the projection relation (near in every factor).
    """

    factors: tuple[DescriptiveSpace, ...] = ()
    components: Mapping[int, tuple[int, ...]] = None

    def project(self, a, i: int) -> frozenset:
        return frozenset(self.components[pid][i] for pid in self.subset(a))

    def product_near(self, a, b) -> bool:
        a, b = self.subset(a), self.subset(b)
        if not a or not b:
            return False
        return all(f.descriptively_near(self.project(a, i), self.project(b, i)) for i, f in enumerate(self.factors))


def product_space(spaces: Sequence[DescriptiveSpace]) -> ProductSpace:
    if not spaces:
        raise InputError("product of an empty family")
    spaces = tuple(spaces)
    points, features, components = [], {}, {}
    for new_id, combo in enumerate(itertools.product(*(s.ids for s in spaces))):
        coords = sum((s.base.position(pid).coords for s, pid in zip(spaces, combo)), ())
        points.append(Point(new_id, coords))
        features[new_id] = sum((s.describe(pid) for s, pid in zip(spaces, combo)), ())
        components[new_id] = combo
    # the carrier's metric is bookkeeping only; nearness lives in the factors
    base = FiniteSpace(tuple(points), max(s.eps_spatial for s in spaces))
    table = ProbeTable(sum(s.probes.dim for s in spaces), features)
    return ProductSpace(base, table, max(s.eps_desc for s in spaces), factors=spaces, components=components)


def check_descriptive_axioms(
    space: DescriptiveSpace,
    trials: int = 1000,
    seed: int = 0,
    *,
    relation: Relation | None = None,
    exhaustive: bool | None = None,
) -> AxiomReport:
    """Verify axioms dP.0-dP.3; dP.2 uses the descriptive intersection."""
    rel = space.descriptively_near if relation is None else relation

    def tables(n):
        masks = np.arange(1 << n, dtype=np.int64)
        a, b = masks[:, None], masks[None, :]
        meets = np.zeros((len(masks), len(masks)), dtype=bool)
        for i, adj in enumerate(space.adjacency):
            bit = 1 << i
            meets |= (((a | b) & bit) != 0) & ((a & adj) != 0) & ((b & adj) != 0)
        return near_table(space.adjacency), meets

    return check_axioms(
        space.ids,
        rel,
        lambda a, b: bool(space.descriptive_intersection(a, b)),
        names=("dP.0", "dP.1", "dP.2", "dP.3"),
        relation_name="descriptive",
        trials=trials,
        seed=seed,
        exhaustive=exhaustive,
        tables=tables if relation is None else None,
    )

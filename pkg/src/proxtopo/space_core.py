"""Finite planar proximity spaces with metric nearness.

Two subsets are near when their lower distance ``D(A, B)`` (the smallest
pairwise Euclidean distance) does not exceed the space tolerance
``eps_spatial``.  With ``eps_spatial == 0`` this is the classical
``D(A, B) == 0`` nearness restricted to finite data.

Subsets are plain ``frozenset`` objects of point ids.  Internally every
subset is also encoded as an integer bitmask over the point order, which
keeps exhaustive axiom and continuity checks cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import EmptySet, InputError, InvalidPoint, InvalidSubset

#: Absolute slack added to every distance comparison.
COMPARE_TOL = 1e-9

#: Spaces up to this size are checked over every subset (2**n of them).
EXHAUSTIVE_LIMIT = 10

Subset = frozenset
Relation = Callable[[frozenset, frozenset], bool]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Point:
    id: int
    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not coords:
            raise InputError(f"point {self.id} has no coordinates")
        if not all(math.isfinite(c) for c in coords):
            raise InputError(f"point {self.id} has non-finite coordinates {coords}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "id", int(self.id))


@dataclass(frozen=True)
class FiniteSpace:
    """A nonempty finite point set carrying the metric proximity relation."""

    points: tuple[Point, ...]
    eps_spatial: float = 0.0

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise InputError("a space needs at least one point")
        ids = [p.id for p in points]
        if len(set(ids)) != len(ids):
            raise InputError("point ids must be unique within a space")
        eps = float(self.eps_spatial)
        if not (eps >= 0 and math.isfinite(eps)):
            raise InputError(f"eps_spatial must be a finite nonnegative real, got {eps}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "eps_spatial", eps)

    @classmethod
    def from_coords(cls, coords, eps_spatial: float = 0.0, ids=None) -> "FiniteSpace":
        coords = list(coords)
        ids = range(len(coords)) if ids is None else ids
        return cls(tuple(Point(i, tuple(c)) for i, c in zip(ids, coords)), eps_spatial)

    def __len__(self) -> int:
        return len(self.points)

    @cached_property
    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)

    @cached_property
    def index(self) -> dict[int, int]:
        return {pid: i for i, pid in enumerate(self.ids)}

    @cached_property
    def carrier(self) -> frozenset:
        return frozenset(self.ids)

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array([p.coords for p in self.points], dtype=float)

    @cached_property
    def distances(self) -> np.ndarray:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sqrt((diff ** 2).sum(axis=-1))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Per point, the bitmask of points within ``eps_spatial`` (itself included)."""
        close = self.distances <= self.eps_spatial + COMPARE_TOL
        return tuple(sum(1 << int(j) for j in np.flatnonzero(row)) for row in close)

    def position(self, pid) -> Point:
        try:
            return self.points[self.index[pid]]
        except KeyError:
            raise InvalidPoint(f"unknown point id {pid!r}") from None

    # subset <-> mask plumbing

    def mask_of(self, subset: Iterable[int]) -> int:
        index = self.index
        mask = 0
        try:
            for pid in subset:
                mask |= 1 << index[pid]
        except (KeyError, TypeError):
            bad = [pid for pid in subset if pid not in index]
            raise InvalidSubset(f"ids {bad} are not points of this space") from None
        return mask

    def subset_of(self, mask: int) -> frozenset:
        ids = self.ids
        return frozenset(ids[i] for i in iter_bits(mask))

    def subset(self, ids: Iterable[int]) -> frozenset:
        """Validate ``ids`` against the space and return them as a frozenset."""
        return self.subset_of(self.mask_of(ids))

    def neighbourhood_mask(self, mask: int) -> int:
        adj = self.adjacency
        out = 0
        for i in iter_bits(mask):
            out |= adj[i]
        return out

    # the relation

    def lower_distance(self, a: Iterable[int], b: Iterable[int]) -> float:
        ma, mb = self.mask_of(a), self.mask_of(b)
        if not ma or not mb:
            return math.inf
        ia = list(iter_bits(ma))
        ib = list(iter_bits(mb))
        return float(self.distances[np.ix_(ia, ib)].min())

    def near_masks(self, ma: int, mb: int) -> bool:
        return bool(ma and mb and self.neighbourhood_mask(ma) & mb)

    def near(self, a: Iterable[int], b: Iterable[int]) -> bool:
        """True iff both sets are nonempty and ``D(a, b) <= eps_spatial``."""
        return self.near_masks(self.mask_of(a), self.mask_of(b))

    def closure(self, a: Iterable[int]) -> frozenset:
        ma = self.mask_of(a)
        if not ma:
            raise EmptySet("closure of the empty set is undefined here")
        return self.subset_of(self.neighbourhood_mask(ma))

    def is_closed(self, a: Iterable[int]) -> bool:
        ma = self.mask_of(a)
        return self.neighbourhood_mask(ma) == ma

    def boundary_interior(self, a: Iterable[int]) -> "BoundaryParts":
        """Split the space into boundary, interior and exterior of ``a``.

        The exterior is the complement of the closure; boundary points are the
        closure points lying within ``eps_spatial`` of the exterior.
        """
        ma = self.mask_of(a)
        if not ma:
            raise EmptySet("boundary of the empty set is undefined here")
        full = (1 << len(self)) - 1
        cl = self.neighbourhood_mask(ma)
        exterior = full & ~cl
        bdy = cl & self.neighbourhood_mask(exterior)
        return BoundaryParts(self.subset_of(bdy), self.subset_of(cl & ~bdy), self.subset_of(exterior))

    def restrict(self, subset: Iterable[int]) -> "FiniteSpace":
        keep = self.subset(subset)
        if not keep:
            raise EmptySet("cannot restrict to the empty set")
        return FiniteSpace(tuple(p for p in self.points if p.id in keep), self.eps_spatial)


class BoundaryParts(NamedTuple):
    boundary: frozenset
    interior: frozenset
    exterior: frozenset


# ---------------------------------------------------------------------------
# axiom verification shared by the metric and descriptive relations


@dataclass
class AxiomResult:
    name: str
    checked: int = 0
    violations: int = 0
    counterexamples: list = field(default_factory=list)

    MAX_EXAMPLES = 5

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, **sets):
        self.violations += 1
        if len(self.counterexamples) < self.MAX_EXAMPLES:
            self.counterexamples.append({k: sorted(v) for k, v in sets.items()})

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "passed": self.passed,
            "counterexamples": self.counterexamples,
        }


@dataclass
class AxiomReport:
    relation: str
    size: int
    method: str
    seed: int | None
    trials: int | None
    results: dict[str, AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failures(self) -> list[str]:
        return [name for name, r in self.results.items() if not r.passed]

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "size": self.size,
            "method": self.method,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "axioms": {name: r.to_dict() for name, r in self.results.items()},
        }


def check_axioms(
    ids: tuple[int, ...],
    relation: Relation,
    overlap: Relation,
    *,
    names: tuple[str, str, str, str],
    relation_name: str,
    trials: int = 1000,
    seed: int = 0,
    exhaustive: bool | None = None,
    tables: Callable[[int], tuple[np.ndarray, np.ndarray]] | None = None,
) -> AxiomReport:
    """Check the four proximity axioms for ``relation`` on subsets of ``ids``.

    ``overlap(A, B)`` is the intersection test feeding the third axiom (set
    intersection for the metric relation, descriptive intersection for the
    descriptive one).  Every subset, the empty set included, takes part in
    exhaustive mode; otherwise ``trials`` random triples are drawn from a
    generator seeded with ``seed``.  ``tables(n)``, when given, returns the
    full relation and overlap tables indexed by subset bitmask, sparing the
    per-pair calls in exhaustive mode.
    """
    n = len(ids)
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_LIMIT
    if not exhaustive and trials < 1:
        raise ValueError("trials must be at least 1")
    results = {name: AxiomResult(name) for name in names}
    p0, p1, p2, p3 = (results[name] for name in names)

    if exhaustive:
        size = 1 << n
        subsets = [frozenset(ids[i] for i in iter_bits(m)) for m in range(size)]
        if tables is not None:
            table, meets = tables(n)
        else:
            table = np.array([[relation(a, b) for b in subsets] for a in subsets], dtype=bool)
            meets = np.array([[overlap(a, b) for b in subsets] for a in subsets], dtype=bool)

        p0.checked = 2 * size
        for m in range(size):
            if table[m, 0]:
                p0.record(A=subsets[m], B=())
            if table[0, m]:
                p0.record(A=(), B=subsets[m])

        p1.checked = size * size
        for a, b in np.argwhere(table & ~table.T):
            p1.record(A=subsets[a], B=subsets[b])

        p2.checked = int(meets.sum())
        for a, b in np.argwhere(meets & ~table):
            p2.record(A=subsets[a], B=subsets[b])

        masks = np.arange(size)
        unions = np.bitwise_or.outer(masks, masks)
        p3.checked = size ** 3
        for a in range(size):
            row = table[a]
            bad = row[unions] != (row[:, None] | row[None, :])
            count = int(bad.sum())
            if count:
                for b, c in np.argwhere(bad)[: AxiomResult.MAX_EXAMPLES]:
                    p3.record(A=subsets[a], B=subsets[b], C=subsets[c])
                p3.violations += count - min(count, AxiomResult.MAX_EXAMPLES)
        return AxiomReport(relation_name, n, "exhaustive", None, None, results)

    rng = np.random.default_rng(seed)
    empty = frozenset()
    for _ in range(trials):
        draws = rng.random((3, n)) < 0.5
        a, b, c = (frozenset(ids[i] for i in np.flatnonzero(row)) for row in draws)
        p0.checked += 2
        if relation(a, empty):
            p0.record(A=a, B=())
        if relation(empty, a):
            p0.record(A=(), B=a)
        p1.checked += 1
        if relation(a, b) and not relation(b, a):
            p1.record(A=a, B=b)
        if overlap(a, b):
            p2.checked += 1
            if not relation(a, b):
                p2.record(A=a, B=b)
        p3.checked += 1
        if relation(a, b | c) != (relation(a, b) or relation(a, c)):
            p3.record(A=a, B=b, C=c)
    return AxiomReport(relation_name, n, "sampled", seed, trials, results)


def neighbourhood_table(adjacency: Sequence[int]) -> np.ndarray:
    """Neighbourhood bitmask of every subset bitmask, built one low bit at a time."""
    size = 1 << len(adjacency)
    nb = np.zeros(size, dtype=np.int64)
    for m in range(1, size):
        low = m & -m
        nb[m] = nb[m ^ low] | adjacency[low.bit_length() - 1]
    return nb


def near_table(adjacency: Sequence[int]) -> np.ndarray:
    """``near[a, b]`` for all subset bitmasks: some point of b lies in a's neighbourhood."""
    nb = neighbourhood_table(adjacency)
    masks = np.arange(len(nb), dtype=np.int64)
    return (nb[:, None] & masks[None, :]) != 0


def check_cech_axioms(
    space: FiniteSpace,
    trials: int = 1000,
    seed: int = 0,
    *,
    relation: Relation | None = None,
    exhaustive: bool | None = None,
) -> AxiomReport:
    """Verify axioms P.0-P.3 for the space's nearness (or an injected ``relation``)."""
    rel = space.near if relation is None else relation

    def tables(n):
        masks = np.arange(1 << n, dtype=np.int64)
        return near_table(space.adjacency), (masks[:, None] & masks[None, :]) != 0

    return check_axioms(
        space.ids,
        rel,
        lambda a, b: bool(a & b),
        names=("P.0", "P.1", "P.2", "P.3"),
        relation_name="cech",
        trials=trials,
        seed=seed,
        exhaustive=exhaustive,
        tables=tables if relation is None else None,
    )

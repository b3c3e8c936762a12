"""Covers, nerve complexes, GF(2) Betti numbers and good-cover checks.

Homotopy type is compared only through (beta0, beta1): equal Betti numbers
are necessary for equal homotopy type, never sufficient.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .cycles import BettiPair, CycleSystem, Graph, betti_graph, system_realization
from .descriptive import DescriptiveSpace
from .errors import EmptySet, InputError, MissingProbe, NoRealization, NotACover
from .homotopy import CONTRACTIBILITY_MODES
from .space_core import COMPARE_TOL, FiniteSpace

NECESSARY_ONLY = "Betti agreement is a necessary condition for equal homotopy type, not a proof"


@dataclass(frozen=True)
class Cover:
    elements: tuple[frozenset, ...]
    universe: frozenset
    graph: Graph | None = None
    space: FiniteSpace | DescriptiveSpace | None = None

    def __post_init__(self):
        elements = tuple(frozenset(e) for e in self.elements)
        if not elements:
            raise InputError("a cover needs at least one element")
        if any(not e for e in elements):
            raise EmptySet("cover elements must be nonempty")
        universe = frozenset(self.universe)
        stray = sorted(frozenset().union(*elements) - universe)
        if stray:
            raise InputError(f"cover elements use ids {stray} outside the universe")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "universe", universe)

    @classmethod
    def from_graph(cls, graph: Graph, elements: Sequence) -> "Cover":
        return cls(tuple(elements), graph.vertices, graph=graph)

    @classmethod
    def from_system(cls, sys: CycleSystem) -> "Cover":
        """Cover of a system's union graph by its member cycles."""
        graph, parts = system_realization(sys)
        return cls(tuple(parts), graph.vertices, graph=graph)

    def __len__(self) -> int:
        return len(self.elements)

    def with_element(self, extra) -> "Cover":
        return Cover(self.elements + (frozenset(extra),), self.universe, self.graph, self.space)


def is_cover(c: Cover) -> bool:
    return frozenset().union(*c.elements) == c.universe


def _require_cover(c: Cover) -> None:
    if not is_cover(c):
        raise NotACover(f"elements miss {sorted(c.universe - frozenset().union(*c.elements))}")


def _intersector(c: Cover, mode: str):
    """Function from a tuple of element indices to the points witnessing that subfamily."""
    if mode == "spatial":
        return lambda idx: frozenset.intersection(*(c.elements[i] for i in idx))
    if mode in ("descriptive", "degenerate"):
        if not isinstance(c.space, DescriptiveSpace):
            raise MissingProbe("descriptive intersections need a space with probe vectors")
        return lambda idx: c.space.multi_intersection([c.elements[i] for i in idx])
    raise ValueError(f"unknown mode {mode!r}; expected one of {CONTRACTIBILITY_MODES}")


@dataclass(frozen=True)
class SimplicialComplex:
    vertex_count: int
    simplices: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        simplices = tuple(sorted({tuple(sorted(s)) for s in self.simplices}, key=lambda s: (len(s), s)))
        object.__setattr__(self, "simplices", simplices)

    def faces(self, k: int) -> list[tuple[int, ...]]:
        """The k-dimensional simplices."""
        return [s for s in self.simplices if len(s) == k + 1]

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def is_downward_closed(self) -> bool:
        present = set(self.simplices)
        return all(
            face in present
            for s in self.simplices
            if len(s) > 1
            for face in itertools.combinations(s, len(s) - 1)
        )

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def to_dict(self) -> dict:
        return {"vertex_count": self.vertex_count, "simplices": [list(s) for s in self.simplices]}


def nerve(c: Cover, mode: str = "spatial", max_dim: int = 3) -> SimplicialComplex:
    """Nerve of a cover up to dimension ``max_dim``.

    Subfamilies are grown one element at a time and only from subfamilies
    already accepted, so every face of a simplex is itself a simplex even in
    descriptive mode with a positive tolerance.
    """
    _require_cover(c)
    meet = _intersector(c, mode)
    n = len(c.elements)
    layer = [(i,) for i in range(n)]
    simplices = list(layer)
    for _ in range(max_dim):
        present = set(layer)
        nxt = []
        for s in layer:
            for v in range(s[-1] + 1, n):
                cand = s + (v,)
                if all(face in present for face in itertools.combinations(cand, len(cand) - 1)) and meet(cand):
                    nxt.append(cand)
        if not nxt:
            break
        simplices.extend(nxt)
        layer = nxt
    return SimplicialComplex(n, tuple(simplices))


def gf2_rank(columns: Sequence[int]) -> int:
    """Rank over GF(2) of vectors stored as integer bitsets."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top not in pivots:
                pivots[top] = col
                rank += 1
                break
            col ^= pivots[top]
    return rank


def boundary_columns(k_faces: Sequence[tuple], lower: Sequence[tuple]) -> list[int]:
    """Columns of the mod-2 boundary map from k-faces to (k-1)-faces."""
    row = {s: i for i, s in enumerate(lower)}
    cols = []
    for s in k_faces:
        bits = 0
        for face in itertools.combinations(s, len(s) - 1):
            bits |= 1 << row[face]
        cols.append(bits)
    return cols


@dataclass(frozen=True)
class HomologyReport:
    beta0: int
    beta1: int
    beta2: int
    counts: tuple[int, ...]
    ranks: tuple[int, ...]

    @property
    def pair(self) -> BettiPair:
        return BettiPair(self.beta0, self.beta1)

    def to_dict(self) -> dict:
        return {
            "beta0": self.beta0,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "counts": list(self.counts),
            "ranks": list(self.ranks),
        }


def betti_complex(k: SimplicialComplex) -> HomologyReport:
    """Betti numbers over GF(2) from ranks of the boundary matrices.

    ``ranks[d]`` is the rank of the boundary map out of dimension ``d``
    (``ranks[0] = 0``).  Only simplices present are used, so beta2 is exact
    only when the complex was built to at least dimension 3.
    """
    if not k.is_downward_closed():
        raise InputError("complex is not closed under taking faces")
    by_dim = [k.faces(d) for d in range(max(k.dimension, 2) + 2)]
    by_dim[0] = [(v,) for v in range(k.vertex_count)]
    counts = tuple(len(f) for f in by_dim)
    ranks = [0] + [gf2_rank(boundary_columns(by_dim[d], by_dim[d - 1])) for d in range(1, len(by_dim))]
    betti = [counts[d] - ranks[d] - ranks[d + 1] for d in range(3)]
    return HomologyReport(betti[0], betti[1], betti[2], counts, tuple(ranks))


def clique_complex(space: FiniteSpace, carrier, max_dim: int = 2) -> SimplicialComplex:
    """Complex of mutually near point sets (within ``eps_spatial``) on ``carrier``."""
    ids = sorted(space.subset(carrier))
    d = space.distances
    idx = [space.index[pid] for pid in ids]
    tol = space.eps_spatial + COMPARE_TOL
    near = {(a, b) for a in range(len(ids)) for b in range(a + 1, len(ids)) if d[idx[a], idx[b]] <= tol}
    simplices = [(i,) for i in range(len(ids))]
    layer = list(simplices)
    for _ in range(max_dim):
        nxt = [s + (v,) for s in layer for v in range(s[-1] + 1, len(ids)) if all((u, v) in near for u in s)]
        simplices.extend(nxt)
        layer = nxt
    return SimplicialComplex(len(ids), tuple(simplices))


def realization_betti(c: Cover, carrier) -> BettiPair:
    """(beta0, beta1) of the realization of ``carrier``: induced graph or near-point clique complex."""
    if c.graph is not None:
        return betti_graph(c.graph.induced(carrier))
    if c.space is not None:
        base = c.space.base if isinstance(c.space, DescriptiveSpace) else c.space
        return betti_complex(clique_complex(base, carrier)).pair
    raise NoRealization("cover carries neither a graph nor a space")


def _contractible(c: Cover, carrier, mode: str) -> bool:
    space = c.space if isinstance(c.space, DescriptiveSpace) else None
    if mode != "spatial" and space is not None:
        # a carrier with a single description is contractible in these modes
        if space.description_diameter(carrier) <= space.eps_desc + COMPARE_TOL:
            return True
    return realization_betti(c, carrier) == (1, 0)


@dataclass
class GoodCoverReport:
    good: bool
    mode: str
    include_singletons: bool
    max_size: int
    checked: int
    failures: list[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.good

    def to_dict(self) -> dict:
        return {
            "good": self.good,
            "mode": self.mode,
            "include_singletons": self.include_singletons,
            "max_size": self.max_size,
            "checked": self.checked,
            "failures": self.failures,
        }


def is_good_cover(c: Cover, mode: str = "spatial", include_singletons: bool = True, max_size: int = 4) -> GoodCoverReport:
    """Test every nonvoid intersection of up to ``max_size`` elements for contractibility.

    With ``include_singletons`` off, the elements themselves are not tested,
    only intersections of two or more of them.
    """
    if mode not in CONTRACTIBILITY_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {CONTRACTIBILITY_MODES}")
    _require_cover(c)
    meet = _intersector(c, mode)
    n = len(c.elements)
    checked = 0
    failures = []
    for size in range(1 if include_singletons else 2, min(max_size, n) + 1):
        for idx in itertools.combinations(range(n), size):
            carrier = meet(idx)
            if not carrier:
                continue
            checked += 1
            if not _contractible(c, carrier, mode):
                b = realization_betti(c, carrier)
                failures.append({"subfamily": list(idx), "beta": [b.beta0, b.beta1]})
    return GoodCoverReport(not failures, mode, include_singletons, max_size, checked, failures)


@dataclass
class ComparisonReport:
    nerve_betti: BettiPair
    union_betti: BettiPair
    good: GoodCoverReport
    note: str = NECESSARY_ONLY
    assumptions: tuple[str, ...] = ()

    @property
    def equal(self) -> bool:
        return self.nerve_betti == self.union_betti

    @property
    def explanation(self) -> str:
        if self.equal:
            return "nerve and union agree in (beta0, beta1)"
        if not self.good.good:
            bad = [f["subfamily"] for f in self.good.failures]
            return f"Betti numbers differ; the cover is not good (non-contractible subfamilies {bad})"
        return "Betti numbers differ although the cover passed the goodness test"

    def to_dict(self) -> dict:
        return {
            "nerve_betti": list(self.nerve_betti),
            "union_betti": list(self.union_betti),
            "equal": self.equal,
            "good": self.good.to_dict(),
            "explanation": self.explanation,
            "note": self.note,
            "assumptions": list(self.assumptions),
        }


def nerve_theorem_check(
    c: Cover,
    mode: str = "spatial",
    max_dim: int | None = None,
    include_singletons: bool = True,
) -> ComparisonReport:
    """Compare (beta0, beta1) of the nerve with those of the union's realization."""
    _require_cover(c)
    max_dim = max(3, len(c.elements) - 1) if max_dim is None else max_dim
    nerve_mode = "spatial" if mode == "spatial" else "descriptive"
    k = nerve(c, nerve_mode, max_dim)
    good = is_good_cover(c, mode, include_singletons, max_size=max_dim + 1)
    assumptions = ("structural hypotheses on the carrier beyond goodness are assumed, not checked",)
    return ComparisonReport(betti_complex(k).pair, realization_betti(c, c.universe), good, assumptions=assumptions)

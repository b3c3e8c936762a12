"""Time-sampled proximal homotopies, proximal paths and contractibility.

A homotopy is stored as a list of frames ``H_0 .. H_m`` (maps X -> Y) on a
strictly increasing grid ``0 = t_0 < ... < t_m = 1``.  Continuity is checked
on the product ``X x grid``: rectangles ``A x S`` and ``B x T`` are near when
``A`` is near ``B`` in X and ``S`` is near ``T`` in the interval.

Two grid times are near when they are at most one grid step apart (index
distance <= 1), unless an explicit metric tolerance ``eps_time`` is given.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cycles import Graph, betti_graph
from .descriptive import DescriptiveSpace
from .errors import (
    CompositionMismatch,
    EmptySet,
    EndpointMismatch,
    FrameMismatch,
    InputError,
    MissingProbe,
    NoRealization,
    RelViolation,
)
from .maps import ContinuityWitness, SpaceMap, compose, relation_space
from .space_core import COMPARE_TOL


def _check_grid(grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(t) for t in grid)
    if len(grid) < 2:
        raise InputError("a time grid needs at least the endpoints 0 and 1")
    if abs(grid[0]) > 1e-12 or abs(grid[-1] - 1.0) > 1e-12:
        raise InputError(f"time grid must start at 0 and end at 1, got {grid[0]} .. {grid[-1]}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InputError("time grid must be strictly increasing")
    return grid


def uniform_grid(steps: int) -> tuple[float, ...]:
    return tuple(i / steps for i in range(steps + 1))


@dataclass(frozen=True)
class DiscreteHomotopy:
    frames: tuple[SpaceMap, ...]
    time_grid: tuple[float, ...] = None

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise InputError("a homotopy needs frames")
        grid = uniform_grid(len(frames) - 1) if self.time_grid is None else _check_grid(self.time_grid)
        if len(grid) != len(frames):
            raise InputError(f"{len(frames)} frames but {len(grid)} grid times")
        first = frames[0]
        for k, fr in enumerate(frames[1:], 1):
            if fr.source != first.source or fr.target != first.target:
                raise InputError(f"frame {k} has a different source or target")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "time_grid", grid)

    @classmethod
    def constant(cls, f: SpaceMap, grid: Sequence[float] = (0.0, 1.0)) -> "DiscreteHomotopy":
        grid = _check_grid(grid)
        return cls(tuple(f for _ in grid), grid)

    @property
    def source(self):
        return self.frames[0].source

    @property
    def target(self):
        return self.frames[0].target

    def reversed(self) -> "DiscreteHomotopy":
        """The homotopy run backwards: ``H'(x, t) = H(x, 1 - t)``."""
        grid = tuple(1.0 - t for t in reversed(self.time_grid))
        return DiscreteHomotopy(tuple(reversed(self.frames)), (0.0,) + grid[1:-1] + (1.0,))

    def time_near(self, i: int, j: int, eps_time: float | None = None) -> bool:
        if eps_time is None:
            return abs(i - j) <= 1
        return abs(self.time_grid[i] - self.time_grid[j]) <= eps_time + COMPARE_TOL


def verify_homotopy(
    h: DiscreteHomotopy,
    f: SpaceMap,
    g: SpaceMap,
    mode: str = "spatial",
    rel=None,
    eps_time: float | None = None,
) -> ContinuityWitness:
    """Verify that ``h`` is a proximal homotopy from ``f`` to ``g``.

    Both relations involved are generated by their point pairs (two sets are
    near iff some member pair is), so continuity on rectangles of
    ``X x grid`` holds exactly when it holds on single points ``(x, t_i)``;
    that pointwise check is what runs here.
    """
    if not h.frames[0].same_function(f):
        raise EndpointMismatch("first frame differs from the start map")
    if not h.frames[-1].same_function(g):
        raise EndpointMismatch("last frame differs from the end map")
    if rel is not None:
        fixed = h.source.subset(rel)
        for k, frame in enumerate(h.frames):
            for pid in sorted(fixed):
                if frame(pid) != f(pid):
                    raise RelViolation(pid, h.time_grid[k])

    src = relation_space(h.source, mode)
    tgt = relation_space(h.target, mode)
    ids = src.ids
    tindex = tgt.base.index if isinstance(tgt, DescriptiveSpace) else tgt.index
    images = [[1 << tindex[fr(pid)] for pid in ids] for fr in h.frames]
    adj = src.adjacency
    m = len(h.frames)
    params = {"mode": mode, "eps_time": "grid-step" if eps_time is None else eps_time}
    checked = 0
    for i in range(m):
        for j in range(m):
            if not h.time_near(i, j, eps_time):
                continue
            for a in range(len(ids)):
                for b in range(len(ids)):
                    if not adj[a] >> b & 1:
                        continue
                    checked += 1
                    if not tgt.near_masks(images[i][a], images[j][b]):
                        ce = (
                            frozenset({(ids[a], h.time_grid[i])}),
                            frozenset({(ids[b], h.time_grid[j])}),
                        )
                        return ContinuityWitness(False, ce, checked, "pointwise", params)
    return ContinuityWitness(True, None, checked, "pointwise", params)


def concat(first: DiscreteHomotopy, second: DiscreteHomotopy) -> DiscreteHomotopy:
    """Run ``first`` on [0, 1/2] and ``second`` on [1/2, 1]; the shared frame appears once."""
    if not first.frames[-1] == second.frames[0]:
        raise FrameMismatch("final frame of the first homotopy differs from the initial frame of the second")
    grid = tuple(t / 2 for t in first.time_grid) + tuple(0.5 + t / 2 for t in second.time_grid[1:])
    return DiscreteHomotopy(first.frames + second.frames[1:], grid)


def compose_homotopy(h: DiscreteHomotopy, post_map: SpaceMap) -> DiscreteHomotopy:
    """Frame-wise ``post_map`` after ``h``."""
    if h.target != post_map.source:
        raise CompositionMismatch("post map does not start at the homotopy target")
    return DiscreteHomotopy(tuple(compose(fr, post_map) for fr in h.frames), h.time_grid)


def pre_compose(h: DiscreteHomotopy, pre_map: SpaceMap) -> DiscreteHomotopy:
    """Frame-wise ``h`` after ``pre_map``."""
    if pre_map.target != h.source:
        raise CompositionMismatch("pre map does not land in the homotopy source")
    return DiscreteHomotopy(tuple(compose(pre_map, fr) for fr in h.frames), h.time_grid)


def verify_homotopy_equivalence(
    f: SpaceMap,
    g: SpaceMap,
    F: DiscreteHomotopy,
    G: DiscreteHomotopy,
    mode: str = "spatial",
) -> bool:
    """Check the witnesses ``F: g.f ~ id_X`` and ``G: f.g ~ id_Y``."""
    if f.target != g.source or g.target != f.source:
        raise CompositionMismatch("f and g must run between the same two spaces in opposite directions")
    gf = compose(f, g)
    fg = compose(g, f)
    ok_x = verify_homotopy(F, gf, SpaceMap.identity(f.source), mode)
    ok_y = verify_homotopy(G, fg, SpaceMap.identity(f.target), mode)
    return bool(ok_x) and bool(ok_y)


@dataclass(frozen=True)
class ProximalPath:
    space: object
    samples: tuple[int, ...]
    time_grid: tuple[float, ...] = None

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise EmptySet("a path needs at least one sample")
        self.space.subset(samples)
        grid = uniform_grid(max(len(samples) - 1, 1)) if self.time_grid is None else _check_grid(self.time_grid)
        if len(samples) == 1:
            samples = samples * 2
        if len(grid) != len(samples):
            raise InputError(f"{len(samples)} samples but {len(grid)} grid times")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "time_grid", grid)

    @classmethod
    def constant(cls, space, x0: int, steps: int = 1) -> "ProximalPath":
        return cls(space, (x0,) * (steps + 1))

    @property
    def start(self) -> int:
        return self.samples[0]

    @property
    def end(self) -> int:
        return self.samples[-1]


def verify_path(path: ProximalPath, mode: str = "spatial") -> bool:
    """Grid-adjacent samples must be near (descriptively near in descriptive mode)."""
    rel = relation_space(path.space, mode)
    index = rel.base.index if isinstance(rel, DescriptiveSpace) else rel.index
    bits = [1 << index[pid] for pid in path.samples]
    return all(rel.near_masks(a, b) for a, b in zip(bits, bits[1:]))


@dataclass(frozen=True)
class PathClass:
    representatives: tuple[ProximalPath, ...] = field(default_factory=tuple)

    def __post_init__(self):
        reps = tuple(self.representatives)
        if not reps:
            raise InputError("a path class needs a representative")
        ends = {(p.start, p.end) for p in reps}
        if len(ends) != 1:
            raise InputError(f"representatives disagree on endpoints: {sorted(ends)}")
        object.__setattr__(self, "representatives", reps)


CONTRACTIBILITY_MODES = ("spatial", "descriptive", "degenerate")


def is_contractible(
    graph: Graph | None,
    mode: str = "spatial",
    *,
    space: DescriptiveSpace | None = None,
    carrier=None,
) -> bool:
    """Graph-level stand-in for contractibility.

    A realization counts as contractible when it is a tree (one component, no
    independent cycle).  In the descriptive modes a carrier whose points all
    share one description also counts: its identity map is then a degenerate
    descriptive constant map, homotopic to a constant map.
    """
    if mode not in CONTRACTIBILITY_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {CONTRACTIBILITY_MODES}")
    if carrier is None and graph is not None:
        carrier = graph.vertices
    if mode != "spatial" and space is not None and carrier:
        if not isinstance(space, DescriptiveSpace):
            raise MissingProbe("descriptive contractibility needs probe vectors")
        if space.description_diameter(carrier) <= space.eps_desc + COMPARE_TOL:
            return True
    if graph is None:
        raise NoRealization("no graph realization to test for contractibility")
    return betti_graph(graph) == (1, 0)

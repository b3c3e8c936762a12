"""Seeded fixture generators shared by the unit, property and acceptance tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from proxtopo import (
    CycleSystem,
    DescriptiveSpace,
    FiniteSpace,
    Graph,
    PathCycle,
    PlanarCurve,
    SpaceMap,
    check_continuity,
)
from proxtopo.homotopy import DiscreteHomotopy, verify_homotopy
from proxtopo.nerves import Cover

EPS_CHOICES = (0.0, 1.0, 1.5, 2.0)
DESC_EPS_CHOICES = (0.0, 0.5, 1.0)


# spaces


def square_space(eps: float = 1.0) -> FiniteSpace:
    return FiniteSpace.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)], eps)


def two_color(eps_spatial: float = 1.0, eps_desc: float = 0.0) -> DescriptiveSpace:
    """Unit square whose opposite corners share a colour: p0, p2 red and p1, p3 blue."""
    return DescriptiveSpace.from_table([(0, 0), (1, 0), (1, 1), (0, 1)], [[0], [1], [0], [1]], eps_spatial, eps_desc)


def chain_space(n: int, eps: float = 1.0) -> FiniteSpace:
    return FiniteSpace.from_coords([(x, 0) for x in range(n)], eps)


def random_space(rng, n: int | None = None, n_max: int = 8, grid: int = 4) -> DescriptiveSpace:
    """Integer coordinates on a small grid (so ties at eps are common), small integer features."""
    n = int(rng.integers(1, n_max + 1)) if n is None else n
    coords = rng.integers(0, grid, (n, 2)).astype(float)
    dim = int(rng.integers(1, 3))
    feats = rng.integers(0, 3, (n, dim)).astype(float)
    return DescriptiveSpace.from_table(
        coords, feats, float(rng.choice(EPS_CHOICES)), float(rng.choice(DESC_EPS_CHOICES))
    )


def components(adjacency, n: int) -> list[int]:
    """Connected components of a bitmask adjacency, as bitmasks in order of their lowest point."""
    seen, comps = 0, []
    for i in range(n):
        if seen >> i & 1:
            continue
        comp, frontier = 0, 1 << i
        while frontier:
            comp |= frontier
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= adjacency[low.bit_length() - 1]
                m ^= low
            frontier = nxt & ~comp
        seen |= comp
        comps.append(comp)
    return comps


# maps


def random_map(rng, source, target, mode: str = "spatial", tries: int = 60) -> SpaceMap:
    """A random map passing the continuity check in ``mode``; a constant map if none turns up."""
    tids = target.ids
    for _ in range(tries):
        f = SpaceMap(source, target, {pid: int(rng.choice(tids)) for pid in source.ids})
        if check_continuity(f, mode):
            return f
    return SpaceMap.constant(source, target, int(tids[0]))


@dataclass
class GlueCase:
    f: SpaceMap
    g: SpaceMap
    a: frozenset
    b: frozenset
    mode: str


def glue_case(rng, mode: str) -> GlueCase:
    """Valid gluing data: A, B unions of relation components covering X, f = g on A & B."""
    source = random_space(rng, n_max=6)
    target = random_space(rng, n_max=5)
    rel = source.base if mode == "spatial" else source
    n = len(source.ids)
    comps = components(rel.adjacency, n)
    while True:
        pick = rng.integers(0, 3, len(comps))  # 0: A only, 1: B only, 2: both
        if (pick != 1).any() and (pick != 0).any():
            break
    ma = sum(c for c, p in zip(comps, pick) if p != 1)
    mb = sum(c for c, p in zip(comps, pick) if p != 0)
    a, b = source.subset_of(ma), source.subset_of(mb)
    f = random_map(rng, source, target, mode)
    g = f
    for _ in range(60):
        trial = {pid: f(pid) if pid in a and pid in b else int(rng.choice(target.ids)) for pid in source.ids}
        cand = SpaceMap(source, target, trial)
        if check_continuity(cand, mode):
            g = cand
            break
    return GlueCase(f, g, a, b, mode)


# homotopies


def random_homotopy(rng, f: SpaceMap, steps: int, mode: str = "spatial", tries: int = 40) -> DiscreteHomotopy:
    """Grow a verified homotopy from ``f`` by changing one image per step.

    Each candidate frame is kept only if the frames so far still verify as a
    homotopy in ``mode``; a rejected step repeats the previous frame.
    """
    frames = [f]
    tids = f.target.ids
    for _ in range(steps):
        nxt = frames[-1]
        for _ in range(tries):
            assign = dict(frames[-1].assignment)
            assign[int(rng.choice(f.source.ids))] = int(rng.choice(tids))
            cand = SpaceMap(f.source, f.target, assign)
            if not check_continuity(cand, mode):
                continue
            h = DiscreteHomotopy(tuple(frames) + (cand,))
            if verify_homotopy(h, f, cand, mode):
                nxt = cand
                break
        frames.append(nxt)
    return DiscreteHomotopy(tuple(frames))


def degenerate_fixture(rng):
    """Source X and descriptive target Y with a colour class of 2-4 points; a map into that class."""
    source = random_space(rng, n_max=5)
    k = int(rng.integers(2, 5))
    extra = int(rng.integers(0, 3))
    coords = rng.integers(0, 6, (k + extra, 2)).astype(float)
    feats = np.vstack([np.zeros((k, 1)), rng.integers(2, 5, (extra, 1)).astype(float)])
    target = DescriptiveSpace.from_table(coords, feats, float(rng.choice(EPS_CHOICES)), 0.0)
    cls = target.ids[:k]
    d = SpaceMap(source, target, {pid: int(rng.choice(cls)) for pid in source.ids})
    return d, cls


# graphs, cycles and covers


def cycle_graph(n: int) -> Graph:
    return Graph(frozenset(range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def random_tree(rng, vertices) -> list[tuple[int, int]]:
    vertices = list(vertices)
    order = [vertices[i] for i in rng.permutation(len(vertices))]
    return [(v, order[int(rng.integers(0, k))]) for k, v in enumerate(order) if k]


def random_connected_graph(rng, n: int, extra: int) -> Graph:
    edges = random_tree(rng, range(n))
    have = {frozenset(e) for e in edges}
    for _ in range(extra if n > 1 else 0):
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        if frozenset((u, v)) not in have:
            have.add(frozenset((u, v)))
            edges.append((u, v))
    return Graph(frozenset(range(n)), tuple(edges))


@dataclass
class TreeCover:
    cover: Cover
    nerve_graph: Graph


def tree_cover(rng) -> TreeCover:
    """A good cover of a connected graph by trees meeting pairwise in at most one vertex.

    A random connected "nerve graph" N on k elements is drawn first; every
    edge of N becomes one junction vertex owned by exactly two elements, so
    pairwise intersections are singletons and triple intersections empty.
    Each element is a random tree over its junctions and private vertices.
    """
    k = int(rng.integers(2, 7))
    n_graph = random_connected_graph(rng, k, int(rng.integers(0, k + 1)))
    owned: list[list[int]] = [[] for _ in range(k)]
    next_id = 0
    for u, v in n_graph.edges:
        owned[u].append(next_id)
        owned[v].append(next_id)
        next_id += 1
    edges = []
    for part in owned:
        for _ in range(int(rng.integers(0, 4))):
            part.append(next_id)
            next_id += 1
        edges.extend(random_tree(rng, part))
    graph = Graph(frozenset(range(next_id)), tuple(edges))
    return TreeCover(Cover.from_graph(graph, [frozenset(p) for p in owned]), n_graph)


def fan_system(rng, k: int) -> CycleSystem:
    """k star-shaped polygons in disjoint angular sectors, all through the clasp at the origin."""
    cycles = []
    next_id = 1
    width = 2 * math.pi / k
    for c in range(k):
        m = int(rng.integers(2, 6))
        lo = c * width + 0.1 * width
        hi = (c + 1) * width - 0.1 * width
        ang = np.sort(rng.uniform(lo, hi, m))
        ang[0], ang[-1] = lo, hi
        rad = rng.uniform(2.0, 6.0, m)
        pts = [(0.0, 0.0)] + [(float(r * math.cos(a)), float(r * math.sin(a))) for r, a in zip(rad, ang)]
        cycles.append(PathCycle.from_polygon(pts, ids=[0] + list(range(next_id, next_id + m))))
        next_id += m
    return CycleSystem(tuple(cycles))


def butterfly(scale: float = 2.0, ids=(0, 1, 2, 11, 12, 21, 22)) -> CycleSystem:
    """Three triangles meeting only at the origin: a wedge of three circles."""
    tris = []
    for k in range(3):
        a = 2 * math.pi * k / 3
        p1 = (scale * math.cos(a - 0.4), scale * math.sin(a - 0.4))
        p2 = (scale * math.cos(a + 0.4), scale * math.sin(a + 0.4))
        tris.append(PathCycle.from_polygon([(0.0, 0.0), p1, p2], ids=[ids[0], ids[1 + 2 * k], ids[2 + 2 * k]]))
    return CycleSystem(tuple(tris))


def square_cycle(x: float = 0.0, y: float = 0.0, side: float = 1.0, ids=None) -> PathCycle:
    pts = [(x, y), (x + side, y), (x + side, y + side), (x, y + side)]
    return PathCycle.from_polygon(pts, ids=ids)


# planar polygons


def random_polygon(rng, n_min: int = 5, n_max: int = 20) -> PlanarCurve:
    """Star-shaped simple polygon with well-separated features.

    Vertices sit at sorted random angles (no angular gap near pi, so the
    origin stays inside) and radii in [4, 10]; candidates with an interior
    angle under 20 degrees, an edge under 0.5 or two non-adjacent edges
    closer than 0.5 are redrawn.
    """
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.max(np.diff(np.r_[ang, ang[0] + 2 * math.pi])) >= 0.9 * math.pi:
            continue
        r = rng.uniform(0.4, 1.0, n) * 10
        curve = PlanarCurve.polygon(list(zip(r * np.cos(ang), r * np.sin(ang))))
        if curve.min_angle() < math.radians(20):
            continue
        if curve.min_segment_length() < 0.5 or curve.min_gap() < 0.5:
            continue
        return curve

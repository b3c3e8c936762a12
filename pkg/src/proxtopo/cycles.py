"""Path cycles, multi-path cycles, cycle systems and their graph realizations."""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .errors import (
    Disconnected,
    InputError,
    InvalidCycle,
    MultipleCommonVertices,
    NoCommonVertex,
)
from .geometry import (
    Pt,
    first_self_intersection,
    same_point,
    segments_intersect,
    touch_only_at,
)


def _pt(xy) -> Pt:
    x, y = xy
    return (float(x), float(y))


@dataclass(frozen=True)
class PathEdge:
    from_v: int
    to_v: int
    polyline: tuple[Pt, ...]

    def __post_init__(self):
        line = tuple(_pt(p) for p in self.polyline)
        if len(line) < 2:
            raise InputError(f"edge {self.from_v}->{self.to_v} needs at least two polyline points")
        object.__setattr__(self, "polyline", line)

    def oriented(self, start: int) -> tuple[Pt, ...]:
        """The polyline traversed from vertex ``start``."""
        return self.polyline if start == self.from_v else tuple(reversed(self.polyline))

    def joins(self, u: int, v: int) -> bool:
        return {self.from_v, self.to_v} == {u, v} if u != v else self.from_v == self.to_v == u


@dataclass(frozen=True)
class PathCycle:
    vertices: tuple[tuple[int, Pt], ...]
    edges: tuple[PathEdge, ...]

    def __post_init__(self):
        verts = tuple((int(v), _pt(xy)) for v, xy in self.vertices)
        if not verts:
            raise InputError("a cycle needs vertices")
        if len({v for v, _ in verts}) != len(verts):
            raise InputError("vertex ids must be unique within a cycle")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def from_polygon(cls, coords: Sequence, ids: Sequence[int] | None = None) -> "PathCycle":
        """A cycle with one straight edge per consecutive vertex pair."""
        coords = [_pt(c) for c in coords]
        ids = list(range(len(coords))) if ids is None else list(ids)
        n = len(coords)
        edges = tuple(PathEdge(ids[i], ids[(i + 1) % n], (coords[i], coords[(i + 1) % n])) for i in range(n))
        return cls(tuple(zip(ids, coords)), edges)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.vertices)

    @property
    def positions(self) -> dict[int, Pt]:
        return dict(self.vertices)

    def multiplicity(self) -> Counter:
        return Counter(frozenset((e.from_v, e.to_v)) for e in self.edges)

    def link_edges(self, i: int) -> list[PathEdge]:
        """Edges joining the i-th vertex to the next one (cyclically)."""
        n = len(self.vertices)
        u, v = self.vertices[i][0], self.vertices[(i + 1) % n][0]
        return [e for e in self.edges if e.joins(u, v)]


@dataclass(frozen=True)
class CycleSystem:
    cycles: tuple[PathCycle, ...]

    def __post_init__(self):
        cycles = tuple(self.cycles)
        if not cycles:
            raise InputError("a cycle system needs at least one cycle")
        object.__setattr__(self, "cycles", cycles)


@dataclass
class ValidationReport:
    kind: str
    issues: list[dict] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.issues

    def __bool__(self) -> bool:
        return self.valid

    def kinds(self) -> list[str]:
        return [issue["type"] for issue in self.issues]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "valid": self.valid, "issues": self.issues}


def validate_cycle(c: PathCycle, kind: str = "simple") -> ValidationReport:
    """Check chain closure, the no-end-vertex rule and (simple kind) planarity."""
    if kind not in ("simple", "multi"):
        raise ValueError(f"unknown cycle kind {kind!r}")
    report = ValidationReport(kind)
    pos = c.positions
    n = len(c.vertices)

    for k, e in enumerate(c.edges):
        for end, vid in ((e.polyline[0], e.from_v), (e.polyline[-1], e.to_v)):
            if vid not in pos:
                report.issues.append({"type": "UnknownVertex", "edge": k, "vertex": vid})
            elif end != pos[vid]:
                report.issues.append({"type": "OpenChain", "link": k, "reason": "polyline end off its vertex"})

    links = []
    for i in range(n):
        found = c.link_edges(i)
        if not found:
            report.issues.append({"type": "OpenChain", "link": i})
        links.append(found)

    degree = Counter()
    for e in c.edges:
        degree[e.from_v] += 1
        degree[e.to_v] += 1
    for v in c.ids:
        if degree[v] < 2:
            report.issues.append({"type": "EndVertex", "vertex": v})

    if kind == "simple":
        for pair, count in sorted(c.multiplicity().items(), key=lambda kv: sorted(kv[0])):
            if count > 1:
                report.issues.append({"type": "MultiplicityForbidden", "vertices": sorted(pair), "count": count})
        if report.valid:
            chain = _link_chain(c, links)
            segs = [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]
            hit = first_self_intersection(segs, closed=True)
            if hit is not None:
                report.issues.append({"type": "SelfIntersection", "segments": list(hit)})
    elif report.valid:
        hit = _multi_crossing(c)
        if hit is not None:
            report.issues.append({"type": "SelfIntersection", "segments": list(hit)})
    return report


def _link_chain(c: PathCycle, links) -> list[Pt]:
    chain: list[Pt] = []
    for i, found in enumerate(links):
        line = found[0].oriented(c.vertices[i][0])
        chain.extend(line if not chain else line[1:])
    return chain


def _multi_crossing(c: PathCycle) -> tuple[int, int] | None:
    """Segments of distinct edges may meet only at a shared vertex."""
    vertex_pts = set(c.positions.values())
    segs = []
    for k, e in enumerate(c.edges):
        line = e.polyline
        for s in range(len(line) - 1):
            segs.append((k, line[s], line[s + 1]))
    for k, e in enumerate(c.edges):
        own = [(line_a, line_b) for (kk, line_a, line_b) in segs if kk == k]
        hit = first_self_intersection(own, closed=False) if len(own) > 1 else None
        if hit is not None:
            base = next(i for i, s in enumerate(segs) if s[0] == k)
            return (base + hit[0], base + hit[1])
    for i in range(len(segs)):
        ki, p1, p2 = segs[i]
        for j in range(i + 1, len(segs)):
            kj, q1, q2 = segs[j]
            if ki == kj or not segments_intersect(p1, p2, q1, q2):
                continue
            shared = [p for p in (p1, p2) if p in vertex_pts and any(same_point(p, q) for q in (q1, q2))]
            if not shared or not all(touch_only_at(p1, p2, q1, q2, s) for s in shared):
                return (i, j)
    return None


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph; parallel edges and loops are kept."""

    vertices: frozenset
    edges: tuple[tuple[int, int], ...] = ()
    positions: Mapping[int, Pt] | None = None

    def __post_init__(self):
        verts = frozenset(self.vertices)
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        dangling = sorted({x for e in edges for x in e} - verts)
        if dangling:
            raise InputError(f"edges touch unknown vertices {dangling}")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    def induced(self, subset) -> "Graph":
        keep = frozenset(subset)
        unknown = keep - self.vertices
        if unknown:
            raise InputError(f"vertices {sorted(unknown)} are not in the graph")
        edges = tuple(e for e in self.edges if e[0] in keep and e[1] in keep)
        pos = None if self.positions is None else {v: self.positions[v] for v in keep}
        return Graph(keep, edges, pos)


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def count(self) -> int:
        return sum(1 for x in self.parent if self.parent[x] == x)


class BettiPair(NamedTuple):
    beta0: int
    beta1: int


def betti_graph(g: Graph) -> BettiPair:
    """Components and cycle rank ``|E| - |V| + beta0`` of a multigraph."""
    uf = UnionFind(g.vertices)
    for u, v in g.edges:
        uf.union(u, v)
    beta0 = uf.count()
    return BettiPair(beta0, len(g.edges) - len(g.vertices) + beta0)


@dataclass(frozen=True)
class PresentationSummary:
    generator_count: int
    generators: tuple[tuple[int, ...], ...]
    tree_edges: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "generator_count": self.generator_count,
            "generators": [list(g) for g in self.generators],
            "tree_edges": list(self.tree_edges),
        }


def free_group_presentation(g: Graph) -> PresentationSummary:
    """Free generators of a connected graph's fundamental group.

    A BFS spanning tree is grown from the smallest vertex; each non-tree edge
    closes one generator loop, returned as the vertex walk it follows.
    """
    if not g.vertices:
        raise Disconnected("empty graph")
    incident: dict[int, list[int]] = {v: [] for v in g.vertices}
    for k, (u, v) in enumerate(g.edges):
        incident[u].append(k)
        if v != u:
            incident[v].append(k)
    root = min(g.vertices)
    parent = {root: None}
    depth = {root: 0}
    tree = []
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for k in incident[u]:
            a, b = g.edges[k]
            w = b if a == u else a
            if w not in parent:
                parent[w] = (u, k)
                depth[w] = depth[u] + 1
                tree.append(k)
                queue.append(w)
    if len(parent) != len(g.vertices):
        raise Disconnected(f"graph has unreachable vertices {sorted(g.vertices - set(parent))}")

    in_tree = set(tree)
    generators = []
    for k, (u, v) in enumerate(g.edges):
        if k in in_tree:
            continue
        left, right = [u], [v]
        a, b = u, v
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a][0]
                left.append(a)
            else:
                b = parent[b][0]
                right.append(b)
        walk = left + list(reversed(right[:-1]))
        generators.append(tuple(walk))
    return PresentationSummary(len(generators), tuple(generators), tuple(sorted(tree)))


def to_graph(item: PathCycle | CycleSystem) -> Graph:
    if isinstance(item, CycleSystem):
        return system_realization(item)[0]
    report = validate_cycle(item, "multi")
    if not report.valid:
        raise InvalidCycle(f"cycle fails validation: {report.issues}")
    return Graph(frozenset(item.ids), tuple((e.from_v, e.to_v) for e in item.edges), item.positions)


def system_realization(sys: CycleSystem) -> tuple[Graph, list[frozenset]]:
    """Merge the member cycles at equal coordinates.

    Returns the union graph and, per member cycle, its vertex set in the
    graph's ids.  A vertex keeps the id it has in the first cycle where its
    position appears; clashing ids of new positions are renumbered.
    """
    by_coord: dict[Pt, int] = {}
    used: set[int] = set()
    edges: list[tuple[int, int]] = []
    parts: list[frozenset] = []
    positions: dict[int, Pt] = {}
    next_free = 1 + max(v for c in sys.cycles for v in c.ids)
    for c in sys.cycles:
        report = validate_cycle(c, "multi")
        if not report.valid:
            raise InvalidCycle(f"member cycle fails validation: {report.issues}")
        local = {}
        for vid, xy in c.vertices:
            gid = by_coord.get(xy)
            if gid is None:
                gid = vid
                if gid in used:
                    gid = next_free
                    next_free += 1
                by_coord[xy] = gid
                used.add(gid)
                positions[gid] = xy
            local[vid] = gid
        edges.extend((local[e.from_v], local[e.to_v]) for e in c.edges)
        parts.append(frozenset(local.values()))
    return Graph(frozenset(used), tuple(edges), positions), parts


def system_common_vertex(sys: CycleSystem) -> int:
    """The single vertex shared by every member cycle (the clasp)."""
    coords = [set(c.positions.values()) for c in sys.cycles]
    common = set.intersection(*coords)
    first = {xy: vid for vid, xy in sys.cycles[0].vertices}
    if not common:
        raise NoCommonVertex("member cycles share no vertex")
    if len(common) > 1:
        raise MultipleCommonVertices(sorted(first[xy] for xy in common))
    return first[common.pop()]


def validate_system(sys: CycleSystem) -> ValidationReport:
    """Members must be valid cycles meeting pairwise in exactly the clasp vertex.

    A single valid cycle is a valid one-member system with no clasp.
    """
    report = ValidationReport("system")
    for k, c in enumerate(sys.cycles):
        sub = validate_cycle(c, "multi")
        for issue in sub.issues:
            report.issues.append({**issue, "cycle": k})
    if len(sys.cycles) == 1:
        return report
    try:
        clasp = system_common_vertex(sys)
    except NoCommonVertex:
        report.issues.append({"type": "NoCommonVertex"})
        return report
    except MultipleCommonVertices as exc:
        report.issues.append({"type": "MultipleCommonVertices", "vertices": list(exc.vertices)})
        return report
    clasp_xy = sys.cycles[0].positions[clasp]
    sets = [set(c.positions.values()) for c in sys.cycles]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] & sets[j] != {clasp_xy}:
                report.issues.append({"type": "PairwiseIntersection", "cycles": [i, j]})
    return report

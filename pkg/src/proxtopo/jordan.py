"""Jordan-curve checks on planar realizations.

A curve is rasterized onto a square grid, the remaining cells are split into
4-connected regions by flood fill, and the result is cross-checked against
even-odd ray casting.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from .cycles import CycleSystem, PathCycle, _link_chain, validate_cycle
from .errors import InputError, InvalidCycle, RegionCountNotTwo, ResolutionTooCoarse
from .geometry import Pt, first_self_intersection, polygon_area, same_point, segments_intersect
from .space_core import COMPARE_TOL

MAX_CELLS = 4096
PAD_CELLS = 2
CELLS_PER_MIN_SEGMENT = 8
# grid origin shift, in cells; irrational-looking so vertices rarely sit on cell edges
GRID_SHIFT = (0.381966, 0.236068)
OUTSIDE, INSIDE, ON = 0, 1, -1


@dataclass(frozen=True)
class PlanarCurve:
    """One or more polygonal chains; a chain lists its points without repeating the first."""

    chains: tuple[tuple[Pt, ...], ...]
    closed: bool = True

    def __post_init__(self):
        chains = tuple(tuple((float(x), float(y)) for x, y in ch) for ch in self.chains)
        if not chains or any(len(ch) < 2 for ch in chains):
            raise InputError("a curve needs at least one chain of two or more points")
        object.__setattr__(self, "chains", chains)

    @classmethod
    def polygon(cls, coords: Sequence) -> "PlanarCurve":
        pts = [tuple(p) for p in coords]
        if len(pts) > 2 and same_point(pts[0], pts[-1]):
            pts = pts[:-1]
        return cls((tuple(pts),), True)

    @classmethod
    def polyline(cls, coords: Sequence) -> "PlanarCurve":
        return cls((tuple(tuple(p) for p in coords),), False)

    @classmethod
    def from_cycle(cls, c: PathCycle) -> "PlanarCurve":
        """The cycle's boundary curve (the outer chain when edges are doubled)."""
        return cls((outer_chain(c),), True)

    @classmethod
    def from_system(cls, sys: CycleSystem) -> "PlanarCurve":
        return cls(tuple(outer_chain(c) for c in sys.cycles), True)

    def chain_segments(self, k: int = 0) -> list[tuple[Pt, Pt]]:
        ch = self.chains[k]
        segs = [(ch[i], ch[i + 1]) for i in range(len(ch) - 1)]
        if self.closed:
            segs.append((ch[-1], ch[0]))
        return segs

    @property
    def segments(self) -> list[tuple[Pt, Pt]]:
        return [s for k in range(len(self.chains)) for s in self.chain_segments(k)]

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        pts = np.array([p for ch in self.chains for p in ch])
        return (float(pts[:, 0].min()), float(pts[:, 1].min()), float(pts[:, 0].max()), float(pts[:, 1].max()))

    def min_segment_length(self) -> float:
        lengths = [math.dist(p, q) for p, q in self.segments]
        return min((length for length in lengths if length > COMPARE_TOL), default=0.0)

    def min_gap(self) -> float:
        """Smallest distance between two segments without a common endpoint (inf if none)."""
        segs = self.segments
        best = math.inf
        for i in range(len(segs)):
            p1, p2 = segs[i]
            for j in range(i + 1, len(segs)):
                q1, q2 = segs[j]
                if any(same_point(a, b) for a in (p1, p2) for b in (q1, q2)):
                    continue
                best = min(best, _segment_gap(p1, p2, q1, q2))
        return best

    def vertex_angles(self) -> list[tuple[Pt, float]]:
        """Each chain vertex with the angle (radians, in [0, pi]) its two segments make."""
        out = []
        for ch in self.chains:
            n = len(ch)
            idx = range(n) if self.closed else range(1, n - 1)
            for i in idx:
                a, p, b = ch[i - 1], ch[i], ch[(i + 1) % n]
                u = (a[0] - p[0], a[1] - p[1])
                v = (b[0] - p[0], b[1] - p[1])
                nu, nv = math.hypot(*u), math.hypot(*v)
                if nu > 0 and nv > 0:
                    cos = max(-1.0, min(1.0, (u[0] * v[0] + u[1] * v[1]) / (nu * nv)))
                    out.append((p, math.acos(cos)))
        return out

    def min_angle(self) -> float:
        return min((a for _, a in self.vertex_angles()), default=math.pi)


def _point_segment_distance(p: Pt, a: Pt, b: Pt) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    denom = dx * dx + dy * dy
    t = 0.0 if denom == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / denom))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def _segment_gap(p1: Pt, p2: Pt, q1: Pt, q2: Pt) -> float:
    if segments_intersect(p1, p2, q1, q2):
        return 0.0
    return min(
        _point_segment_distance(p1, q1, q2),
        _point_segment_distance(p2, q1, q2),
        _point_segment_distance(q1, p1, p2),
        _point_segment_distance(q2, p1, p2),
    )


def corner_radius(angle: float) -> int:
    """Cells around a vertex of this angle where the two rasterized segments crowd each other.

    Two digital lines leaving a vertex at angle ``a`` stay within a cell or
    two of each other for about ``1 / sin(a / 2)`` cells; the figure does not
    shrink when the resolution grows.
    """
    return max(1, math.ceil(2.0 / math.sin(max(angle, 1e-3) / 2)))


def outer_chain(c: PathCycle) -> tuple[Pt, ...]:
    """Closed chain of ``c``; with parallel edges, the simple choice enclosing the largest area."""
    n = len(c.vertices)
    report = validate_cycle(c, "multi")
    if not report.valid:
        raise InvalidCycle(f"cycle fails validation: {report.issues}")
    options = [c.link_edges(i) for i in range(n)]
    if n == 2:
        choices = [(a, b) for a, b in itertools.permutations(options[0], 2)]
    else:
        choices = itertools.islice(itertools.product(*options), 4096)
    best, best_area = None, -1.0
    for choice in choices:
        chain = _link_chain(c, [[e] for e in choice])[:-1]
        segs = [(chain[i], chain[(i + 1) % len(chain)]) for i in range(len(chain))]
        if first_self_intersection(segs, closed=True) is not None:
            continue
        area = abs(polygon_area(chain))
        if area > best_area + COMPARE_TOL:
            best, best_area = tuple(chain), area
    if best is None:
        raise InvalidCycle("no simple closed chain can be drawn through the cycle's edges")
    return best


@dataclass(frozen=True)
class SimplicityResult:
    simple: bool
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.simple

    def to_dict(self) -> dict:
        return {"simple": self.simple, "violation": self.violation}


def is_simple_closed(curve: PlanarCurve) -> SimplicityResult:
    """Exact pairwise segment tests on a single closed chain."""
    if len(curve.chains) != 1:
        return SimplicityResult(False, {"type": "MultipleChains", "count": len(curve.chains)})
    chain = curve.chains[0]
    if not curve.closed:
        return SimplicityResult(False, {"type": "OpenChain"})
    if len(chain) < 3:
        return SimplicityResult(False, {"type": "Degenerate", "points": len(chain)})
    hit = first_self_intersection(curve.chain_segments(0), closed=True)
    if hit is not None:
        return SimplicityResult(False, {"type": "SelfIntersection", "segments": list(hit)})
    return SimplicityResult(True)


@dataclass
class RegionLabeling:
    """Cell labels: 0 for curve cells, 1 for the unbounded region, 2.. for bounded ones.

    ``absorbed`` counts corner pockets merged into the curve cells.
    """

    resolution: float
    origin: tuple[float, float]
    labels: np.ndarray
    region_count: int
    curve: PlanarCurve | None = None
    stable: bool = False
    absorbed: int = 0

    @property
    def cell_size(self) -> float:
        return 1.0 / self.resolution

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    def cell_of(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        cols = np.floor((pts[:, 0] - self.origin[0]) * self.resolution).astype(int)
        rows = np.floor((pts[:, 1] - self.origin[1]) * self.resolution).astype(int)
        return rows, cols

    def label_at(self, points) -> np.ndarray:
        """Labels of the cells holding ``points`` (1 outside the grid, since it is padded)."""
        rows, cols = self.cell_of(points)
        h, w = self.labels.shape
        inside = (rows >= 0) & (rows < h) & (cols >= 0) & (cols < w)
        out = np.ones(len(rows), dtype=self.labels.dtype)
        out[inside] = self.labels[rows[inside], cols[inside]]
        return out

    def dump(self) -> str:
        """One character per cell, top row first: '#' curve, '.' outside, letters for bounded regions."""
        glyph = {0: "#", 1: "."}
        lines = []
        for row in self.labels[::-1]:
            lines.append("".join(glyph.get(int(v), chr(ord("a") + (int(v) - 2) % 26)) for v in row))
        return "\n".join(lines)

    def suggested_reach(self) -> int:
        """Neighbourhood radius (cells) within which every curve cell should see both sides."""
        if self.curve is None:
            return 1
        return max(2, corner_radius(self.curve.min_angle()))


def _rasterize(segments, origin, res, shape) -> np.ndarray:
    """Mark every cell a segment passes through, column by column."""
    grid = np.zeros(shape, dtype=bool)
    x0, y0 = origin
    for p, q in segments:
        (xa, ya), (xb, yb) = sorted((p, q))
        ja = int(math.floor((xa - x0) * res))
        jb = int(math.floor((xb - x0) * res))
        js = np.arange(ja, jb + 1)
        lo = np.maximum(x0 + js / res, xa)
        hi = np.minimum(x0 + (js + 1) / res, xb)
        if xb - xa > 0:
            slope = (yb - ya) / (xb - xa)
            y_lo, y_hi = ya + (lo - xa) * slope, ya + (hi - xa) * slope
        else:
            y_lo, y_hi = np.full(len(js), ya), np.full(len(js), yb)
        ia = np.floor((np.minimum(y_lo, y_hi) - y0) * res).astype(int)
        ib = np.floor((np.maximum(y_lo, y_hi) - y0) * res).astype(int)
        counts = ib - ia + 1
        rows = np.repeat(ia, counts) + (np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts))
        grid[rows, np.repeat(js, counts)] = True
    return grid


FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


def label_regions(curve: PlanarCurve, resolution: float) -> RegionLabeling:
    """Rasterize at one resolution and flood-fill the free cells."""
    xmin, ymin, xmax, ymax = curve.bbox
    cell = 1.0 / resolution
    origin = (xmin - (PAD_CELLS + GRID_SHIFT[0]) * cell, ymin - (PAD_CELLS + GRID_SHIFT[1]) * cell)
    w = int(math.floor((xmax - origin[0]) * resolution)) + PAD_CELLS + 1
    h = int(math.floor((ymax - origin[1]) * resolution)) + PAD_CELLS + 1
    if max(w, h) > MAX_CELLS:
        raise ResolutionTooCoarse(f"grid of {w}x{h} cells exceeds the {MAX_CELLS}-cell cap")
    on_curve = _rasterize(curve.segments, origin, resolution, (h, w))
    raw, count = ndimage.label(~on_curve, structure=FOUR_CONNECTED)
    absorbed = _corner_pockets(curve, raw, count, origin, resolution)
    if absorbed:
        on_curve |= np.isin(raw, absorbed)
        raw[on_curve] = 0
    # renumber: unbounded region (holding the corner cell) first, the rest by first appearance
    outer = raw[0, 0]
    order = [outer] + [v for v in _first_appearance(raw[raw > 0]) if v != outer]
    lut = np.zeros(count + 1, dtype=np.int32)
    for new, old in enumerate(order, 1):
        lut[old] = new
    return RegionLabeling(resolution, origin, lut[raw], len(order), curve, absorbed=len(absorbed))


def _corner_pockets(curve: PlanarCurve, raw, count, origin, resolution) -> list[int]:
    """Bounded regions lying wholly in the crowded zone around some vertex.

    Such pockets are raster artefacts: their size in cells stays the same
    under refinement, so doubling the resolution never removes them.
    """
    near = np.zeros(raw.shape, dtype=bool)
    h, w = raw.shape
    for (x, y), angle in curve.vertex_angles():
        rad = corner_radius(angle)
        c = int(math.floor((x - origin[0]) * resolution))
        r = int(math.floor((y - origin[1]) * resolution))
        near[max(r - rad, 0) : min(r + rad + 1, h), max(c - rad, 0) : min(c + rad + 1, w)] = True
    total = np.bincount(raw.ravel(), minlength=count + 1)
    inside = np.bincount(raw[near], minlength=count + 1)
    outer = raw[0, 0]
    return [k for k in range(1, count + 1) if k != outer and total[k] == inside[k]]


def _first_appearance(values: np.ndarray) -> list[int]:
    _, first = np.unique(values, return_index=True)
    return [int(values[i]) for i in sorted(first)]


def default_resolution(curve: PlanarCurve) -> float:
    """Eight cells across the curve's smallest feature, kept under the grid cap."""
    shortest = curve.min_segment_length()
    if shortest <= 0:
        raise ResolutionTooCoarse("curve has no segment of positive length")
    gap = curve.min_gap()
    if gap <= 0:
        raise ResolutionTooCoarse("curve touches itself, so no resolution separates the sides")
    xmin, ymin, xmax, ymax = curve.bbox
    res = CELLS_PER_MIN_SEGMENT / min(shortest, gap)
    extent = max(xmax - xmin, ymax - ymin)
    # keep the doubled grid under the cap
    return min(res, (MAX_CELLS / 2 - 2 * PAD_CELLS - 2) / extent)


def region_count(curve: PlanarCurve, resolution: float | None = None) -> RegionLabeling:
    """Label regions at the first resolution whose count survives a doubling.

    Starts from ``resolution`` (default: 8 cells per shortest segment) and
    doubles until two consecutive counts agree and a bounded region exists.
    """
    if curve.closed and all(abs(polygon_area(ch)) <= COMPARE_TOL for ch in curve.chains):
        raise ResolutionTooCoarse("curve encloses zero area, so no interior cell can exist")
    res = default_resolution(curve) if resolution is None else float(resolution)
    if res <= 0:
        raise InputError("resolution must be positive")
    current = label_regions(curve, res)
    while True:
        try:
            finer = label_regions(curve, 2 * res)
        except ResolutionTooCoarse:
            raise ResolutionTooCoarse(
                f"region count not stable below the {MAX_CELLS}-cell cap (last count {current.region_count})"
            ) from None
        if finer.region_count == current.region_count and current.region_count >= 2:
            current.stable = True
            return current
        res, current = 2 * res, finer


@dataclass(frozen=True)
class BoundaryResult:
    common: bool
    isolated_cell: tuple[int, int] | None = None
    reach: int = 1

    def __bool__(self) -> bool:
        return self.common

    def to_dict(self) -> dict:
        return {
            "common": self.common,
            "isolated_cell": None if self.isolated_cell is None else list(self.isolated_cell),
            "reach": self.reach,
        }


def common_boundary_check(labeling: RegionLabeling, reach: int | None = 1) -> BoundaryResult:
    """Every curve cell must lie within ``reach`` cells (Chebyshev) of both regions.

    ``reach=1`` is plain 8-adjacency.  Pass ``None`` to use the labeling's
    angle-aware reach, needed where the curve has sharp corners.
    """
    if labeling.region_count != 2:
        raise RegionCountNotTwo(f"expected 2 regions, found {labeling.region_count}")
    if reach is None:
        reach = labeling.suggested_reach()
    size = 2 * reach + 1
    labels = labeling.labels
    near_out = ndimage.maximum_filter(labels == 1, size=size, mode="constant")
    near_in = ndimage.maximum_filter(labels == 2, size=size, mode="constant")
    bad = (labels == 0) & ~(near_out & near_in)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        return BoundaryResult(False, (int(r), int(c)), reach)
    return BoundaryResult(True, None, reach)


def _segment_distance(px, py, a, b) -> np.ndarray:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    denom = dx * dx + dy * dy
    t = np.clip(((px - ax) * dx + (py - ay) * dy) / denom, 0.0, 1.0) if denom > 0 else 0.0
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def points_in_polygon(points, chain: Sequence[Pt], tol: float = COMPARE_TOL) -> np.ndarray:
    """Vectorized even-odd test: 1 inside, 0 outside, -1 on the boundary.

    The half-open crossing rule (a vertex counts for the edge above it only)
    is the usual symbolic perturbation for rays through vertices.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    px, py = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    on = np.zeros(len(pts), dtype=bool)
    n = len(chain)
    for i in range(n):
        a, b = chain[i], chain[(i + 1) % n]
        on |= _segment_distance(px, py, a, b) <= tol
        (xi, yi), (xj, yj) = a, b
        crosses = (yi > py) != (yj > py)
        if yj != yi:
            x_cross = xi + (py - yi) * (xj - xi) / (yj - yi)
            inside ^= crosses & (px < x_cross)
    out = np.where(inside, INSIDE, OUTSIDE)
    out[on] = ON
    return out


def point_in_polygon(p, curve: PlanarCurve) -> str:
    code = int(points_in_polygon([p], curve.chains[0])[0])
    return {INSIDE: "inside", OUTSIDE: "outside", ON: "on"}[code]


def oracle_disagreements(labeling: RegionLabeling, samples: int = 10_000, seed: int = 0) -> tuple[int, int]:
    """Compare flood-fill labels with ray casting on random points off the curve cells.

    Returns ``(compared, disagreements)``.
    """
    curve = labeling.curve
    xmin, ymin, xmax, ymax = curve.bbox
    pad = 2 * labeling.cell_size
    rng = np.random.default_rng(seed)
    pts = np.column_stack(
        [rng.uniform(xmin - pad, xmax + pad, samples), rng.uniform(ymin - pad, ymax + pad, samples)]
    )
    labels = labeling.label_at(pts)
    keep = labels != 0
    ray = points_in_polygon(pts[keep], curve.chains[0])
    fill = np.where(labels[keep] == 1, OUTSIDE, INSIDE)
    return int(keep.sum()), int(np.count_nonzero(ray != fill))


@dataclass
class CurveCheck:
    simple: SimplicityResult
    regions: int | None = None
    resolution: float | None = None
    boundary: BoundaryResult | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return bool(self.simple) and self.regions == 2 and bool(self.boundary)

    def to_dict(self) -> dict:
        return {
            "simple": self.simple.to_dict(),
            "regions": self.regions,
            "resolution": self.resolution,
            "common_boundary": None if self.boundary is None else self.boundary.to_dict(),
            "error": self.error,
            "passed": self.passed,
        }


def check_curve(curve: PlanarCurve, resolution: float | None = None, reach: int | None = None) -> CurveCheck:
    """Simplicity, two regions and a common boundary for one closed chain."""
    simple = is_simple_closed(curve)
    if not simple:
        return CurveCheck(simple)
    try:
        lab = region_count(curve, resolution)
    except ResolutionTooCoarse as exc:
        return CurveCheck(simple, error=str(exc))
    if lab.region_count != 2:
        return CurveCheck(simple, lab.region_count, lab.resolution)
    return CurveCheck(simple, 2, lab.resolution, common_boundary_check(lab, reach))


@dataclass
class ClauseResult:
    applicable: bool
    passed: bool | None = None
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "passed": self.passed, "witnesses": self.witnesses}


CLAUSES = ("1", "2", "3", "4", "5")
CLAUSE_NAMES = {
    "1": "simple path cycle",
    "2": "multi-path cycle (outer boundary)",
    "3": "cycle system (per member cycle)",
    "4": "descriptively good cover",
    "5": "degenerate descriptively good cover",
}


@dataclass
class JordanReport:
    clauses: dict[str, ClauseResult]
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses.values() if c.applicable)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "clauses": {k: {"name": CLAUSE_NAMES[k], **v.to_dict()} for k, v in sorted(self.clauses.items())},
            "notes": self.notes,
        }


def _system_witness(sys: CycleSystem, resolution, reach) -> tuple[bool, dict, list[str]]:
    from .cycles import system_common_vertex

    checks = [check_curve(PlanarCurve.from_cycle(c), resolution, reach) for c in sys.cycles]
    union = PlanarCurve.from_system(sys)
    witnesses = {
        "clasp": system_common_vertex(sys) if len(sys.cycles) > 1 else None,
        "members": [c.to_dict() for c in checks],
    }
    try:
        witnesses["union_regions"] = region_count(union, resolution).region_count
    except ResolutionTooCoarse as exc:
        witnesses["union_regions"] = None
        witnesses["union_error"] = str(exc)
    notes = [
        "each member boundary is checked on its own; the union meets itself at the clasp"
        " and is not asserted to be a simple curve"
    ]
    return all(c.passed for c in checks), witnesses, notes


def jordan_check(
    target: PathCycle | CycleSystem,
    *,
    cover=None,
    cover_mode: str | None = None,
    resolution: float | None = None,
    reach: int | None = None,
) -> JordanReport:
    """Map each Jordan clause to pass/fail with its witnesses.

    Clauses that do not apply to ``target`` are marked not applicable.  The
    cover-based clauses run only when ``cover`` is given and first pass the
    good-cover test in ``cover_mode`` (descriptive or degenerate).
    """
    clauses = {k: ClauseResult(False) for k in CLAUSES}
    notes: list[str] = []
    if isinstance(target, PathCycle):
        simple_kind = validate_cycle(target, "simple")
        if simple_kind.valid:
            chk = check_curve(PlanarCurve.from_cycle(target), resolution, reach)
            clauses["1"] = ClauseResult(True, chk.passed, chk.to_dict())
        else:
            multi = validate_cycle(target, "multi")
            if not multi.valid:
                raise InvalidCycle(f"cycle fails validation: {multi.issues}")
            chk = check_curve(PlanarCurve.from_cycle(target), resolution, reach)
            clauses["2"] = ClauseResult(True, chk.passed, {**chk.to_dict(), "outer_chain": True})
    elif isinstance(target, CycleSystem):
        ok, witnesses, extra = _system_witness(target, resolution, reach)
        clauses["3"] = ClauseResult(True, ok, witnesses)
        notes.extend(extra)
    else:
        raise InputError(f"cannot run Jordan checks on {type(target).__name__}")

    if cover is not None:
        from .nerves import is_good_cover

        mode = cover_mode or "descriptive"
        if mode not in ("descriptive", "degenerate"):
            raise InputError("cover clauses need cover_mode 'descriptive' or 'degenerate'")
        key = "4" if mode == "descriptive" else "5"
        good = is_good_cover(cover, mode)
        if not good:
            clauses[key] = ClauseResult(False, None, {"good_cover": good.to_dict()})
            notes.append("the cover failed the good-cover test, so the clause's hypothesis does not hold")
        else:
            inner = [c for c in ("1", "2", "3") if clauses[c].applicable]
            passed = all(clauses[c].passed for c in inner)
            clauses[key] = ClauseResult(True, passed, {"good_cover": good.to_dict(), "via": inner})
    return JordanReport(clauses, notes)

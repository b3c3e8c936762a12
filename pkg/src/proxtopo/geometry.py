"""Planar segment predicates shared by cycle validation and Jordan checks."""
from __future__ import annotations

from typing import Sequence

from .space_core import COMPARE_TOL

Pt = tuple[float, float]
Segment = tuple[Pt, Pt]


def orient(p: Pt, q: Pt, r: Pt) -> int:
    """Sign of the turn p -> q -> r: +1 left, -1 right, 0 collinear (within tolerance)."""
    cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    if cross > COMPARE_TOL:
        return 1
    if cross < -COMPARE_TOL:
        return -1
    return 0


def same_point(p: Pt, q: Pt) -> bool:
    return abs(p[0] - q[0]) <= COMPARE_TOL and abs(p[1] - q[1]) <= COMPARE_TOL


def _on_segment(p: Pt, q: Pt, r: Pt) -> bool:
    # r collinear with pq: is it inside the bounding box?
    return (
        min(p[0], q[0]) - COMPARE_TOL <= r[0] <= max(p[0], q[0]) + COMPARE_TOL
        and min(p[1], q[1]) - COMPARE_TOL <= r[1] <= max(p[1], q[1]) + COMPARE_TOL
    )


def segments_intersect(p1: Pt, p2: Pt, q1: Pt, q2: Pt) -> bool:
    """Closed-segment intersection test (touching counts)."""
    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and _on_segment(p1, p2, q1))
        or (o2 == 0 and _on_segment(p1, p2, q2))
        or (o3 == 0 and _on_segment(q1, q2, p1))
        or (o4 == 0 and _on_segment(q1, q2, p2))
    )


def touch_only_at(p1: Pt, p2: Pt, q1: Pt, q2: Pt, shared: Pt) -> bool:
    """True when two segments with common endpoint ``shared`` meet nowhere else."""
    a = p2 if same_point(p1, shared) else p1
    b = q2 if same_point(q1, shared) else q1
    if orient(shared, a, b) != 0:
        return True
    # collinear: fine only if they leave the shared point in opposite directions
    da = (a[0] - shared[0], a[1] - shared[1])
    db = (b[0] - shared[0], b[1] - shared[1])
    return da[0] * db[0] + da[1] * db[1] < 0


def chain_segments(chain: Sequence[Pt]) -> list[Segment]:
    return [(chain[i], chain[i + 1]) for i in range(len(chain) - 1)]


def first_self_intersection(segments: Sequence[Segment], closed: bool = True) -> tuple[int, int] | None:
    """First pair ``(i, j)`` of segments of a chain that meet illegally.

    Consecutive segments (and the last/first pair of a closed chain) may only
    share their common endpoint; all other pairs must be disjoint.  A
    zero-length segment is reported against itself.
    """
    n = len(segments)
    for i, (a, b) in enumerate(segments):
        if same_point(a, b):
            return (i, i)
    for i in range(n):
        p1, p2 = segments[i]
        for j in range(i + 1, n):
            q1, q2 = segments[j]
            if j == i + 1:
                if not touch_only_at(p1, p2, q1, q2, p2):
                    return (i, j)
                if n == 2 and closed and not touch_only_at(p1, p2, q1, q2, p1):
                    return (i, j)
                continue
            if closed and i == 0 and j == n - 1:
                if not touch_only_at(p1, p2, q1, q2, p1):
                    return (i, j)
                continue
            if segments_intersect(p1, p2, q1, q2):
                return (i, j)
    return None


def polygon_area(chain: Sequence[Pt]) -> float:
    """Signed shoelace area of a closed chain (first point repeated at the end or not)."""
    pts = list(chain)
    if len(pts) > 1 and same_point(pts[0], pts[-1]):
        pts = pts[:-1]
    total = 0.0
    for i in range(len(pts)):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % len(pts)]
        total += x1 * y2 - x2 * y1
    return total / 2.0

"""Shape persistence across frame sequences via Betti-number descriptors."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .cycles import CycleSystem, betti_graph, to_graph, validate_system
from .errors import InputError, InvalidShape, UnknownVertex
from .space_core import COMPARE_TOL


@dataclass(frozen=True)
class ShapeDescriptor:
    betti: int
    aux: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.aux is not None:
            aux = tuple(float(v) for v in self.aux)
            if not all(math.isfinite(v) for v in aux):
                raise InputError("aux descriptor values must be finite")
            object.__setattr__(self, "aux", aux)

    def distance(self, other: "ShapeDescriptor") -> float:
        """Euclidean distance; aux coordinates count only when both sides carry them."""
        sq = float(self.betti - other.betti) ** 2
        if self.aux is not None and other.aux is not None:
            sq += sum((a - b) ** 2 for a, b in zip(self.aux, other.aux))
        return math.sqrt(sq)

    def matches(self, other: "ShapeDescriptor", eps: float) -> bool:
        return self.distance(other) <= eps + COMPARE_TOL

    def to_dict(self) -> dict:
        return {"betti": self.betti, "aux": None if self.aux is None else list(self.aux)}


def frame_descriptor(shape: CycleSystem, aux_vertex: int | None = None) -> ShapeDescriptor:
    """Betti number of the shape's graph, plus (magnitude, angle) of ``aux_vertex`` if given."""
    report = validate_system(shape)
    if not report.valid:
        raise InvalidShape(f"shape fails validation: {report.issues}")
    betti = betti_graph(to_graph(shape)).beta1
    if aux_vertex is None:
        return ShapeDescriptor(betti)
    for c in shape.cycles:
        pos = c.positions
        if aux_vertex in pos:
            x, y = pos[aux_vertex]
            return ShapeDescriptor(betti, (math.hypot(x, y), math.atan2(y, x)))
    raise UnknownVertex(f"vertex {aux_vertex} is not in the shape")


@dataclass(frozen=True)
class FrameRecord:
    frame_index: int
    timestamp: float
    shapes: tuple[CycleSystem, ...] = ()
    aux_vertices: tuple[int | None, ...] | None = None

    def __post_init__(self):
        shapes = tuple(self.shapes)
        object.__setattr__(self, "shapes", shapes)
        if self.aux_vertices is not None and len(self.aux_vertices) != len(shapes):
            raise InputError("aux_vertices must give one entry per shape")

    def descriptors(self) -> list[ShapeDescriptor]:
        aux = self.aux_vertices or (None,) * len(self.shapes)
        return [frame_descriptor(s, a) for s, a in zip(self.shapes, aux)]


@dataclass
class MatchResult:
    pairs: list[tuple[int, int]]
    ambiguous: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "ambiguous": self.ambiguous}


def match_descriptors(d1: Sequence[ShapeDescriptor], d2: Sequence[ShapeDescriptor], eps: float) -> MatchResult:
    """Greedy nearest-descriptor matching; ties go to the lower shape indices.

    ``ambiguous`` counts shapes on either side with more than one admissible
    partner, where the descriptor cannot tell candidates apart.
    """
    if eps < 0:
        raise InputError("eps must be nonnegative")
    cands = []
    for i, a in enumerate(d1):
        for j, b in enumerate(d2):
            if a.matches(b, eps):
                cands.append((a.distance(b), i, j))
    cands.sort()
    used1, used2, pairs = set(), set(), []
    for _, i, j in cands:
        if i not in used1 and j not in used2:
            used1.add(i)
            used2.add(j)
            pairs.append((i, j))
    per1, per2 = {}, {}
    for _, i, j in cands:
        per1[i] = per1.get(i, 0) + 1
        per2[j] = per2.get(j, 0) + 1
    ambiguous = sum(1 for v in per1.values() if v > 1) + sum(1 for v in per2.values() if v > 1)
    return MatchResult(sorted(pairs), ambiguous)


def match_shapes(f1: FrameRecord, f2: FrameRecord, eps: float = 0.0) -> MatchResult:
    return match_descriptors(f1.descriptors(), f2.descriptors(), eps)


@dataclass
class PersistenceTrack:
    track_id: int
    descriptor: ShapeDescriptor
    intervals: list[list[int]] = field(default_factory=list)
    durations: list[float] = field(default_factory=list)

    @property
    def frames(self) -> list[int]:
        return [k for lo, hi in self.intervals for k in range(lo, hi + 1)]

    def to_dict(self) -> dict:
        return {
            "track_id": self.track_id,
            "descriptor": self.descriptor.to_dict(),
            "intervals": [list(iv) for iv in self.intervals],
            "durations": list(self.durations),
        }


@dataclass
class TrackReport:
    tracks: list[PersistenceTrack]
    eps: float
    fps: float | None
    ambiguity: list[int]

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "fps": self.fps,
            "tracks": [t.to_dict() for t in self.tracks],
            "ambiguity": list(self.ambiguity),
        }


def _check_sequence(frames: Sequence[FrameRecord]) -> None:
    for a, b in zip(frames, frames[1:]):
        if b.frame_index <= a.frame_index:
            raise InputError(f"frame indices must increase: {a.frame_index} then {b.frame_index}")
        if b.timestamp < a.timestamp:
            raise InputError(f"timestamps must not decrease at frame {b.frame_index}")


def track(frames: Sequence[FrameRecord], eps: float = 0.0, fps: float | None = None) -> TrackReport:
    """Chain frame-to-frame matches into tracks with (possibly gapped) intervals.

    A shape matched to one in the previous frame continues that track.  An
    unmatched shape revives the closest idle track with a matching
    descriptor, opening a new interval after the gap, or else starts a track.
    Interval durations are index gaps divided by ``fps`` (or timestamp
    differences when ``fps`` is not given).
    """
    frames = list(frames)
    _check_sequence(frames)
    tracks: list[PersistenceTrack] = []
    ambiguity: list[int] = []
    prev_desc: list[ShapeDescriptor] = []
    prev_owner: list[int] = []
    for pos, fr in enumerate(frames):
        desc = fr.descriptors()
        owner = [-1] * len(desc)
        if pos:
            m = match_descriptors(prev_desc, desc, eps)
            ambiguity.append(m.ambiguous)
            for i, j in m.pairs:
                owner[j] = prev_owner[i]
                tracks[owner[j]].intervals[-1][1] = fr.frame_index
        busy = {t for t in owner if t >= 0}
        for j, d in enumerate(desc):
            if owner[j] >= 0:
                continue
            idle = [t for t in tracks if t.track_id not in busy and t.descriptor.matches(d, eps)]
            if idle:
                best = min(idle, key=lambda t: (t.descriptor.distance(d), t.track_id))
                if pos and best.intervals[-1][1] == frames[pos - 1].frame_index:
                    best.intervals[-1][1] = fr.frame_index
                else:
                    best.intervals.append([fr.frame_index, fr.frame_index])
            else:
                best = PersistenceTrack(len(tracks), d, [[fr.frame_index, fr.frame_index]])
                tracks.append(best)
            owner[j] = best.track_id
            busy.add(best.track_id)
        prev_desc, prev_owner = desc, owner

    stamp = {fr.frame_index: fr.timestamp for fr in frames}
    for t in tracks:
        if fps:
            t.durations = [(hi - lo) / fps for lo, hi in t.intervals]
        else:
            t.durations = [stamp[hi] - stamp[lo] for lo, hi in t.intervals]
    return TrackReport(tracks, eps, fps, ambiguity)

"""JSON loaders and writers for spaces, maps, homotopies, cycles, covers and frames.

Every loader rejects unknown keys.  Paths inside a file are resolved
relative to that file's directory.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cycles import CycleSystem, PathCycle, PathEdge, system_realization, to_graph
from .descriptive import DescriptiveSpace, ProbeTable
from .errors import InputError, MissingProbe
from .homotopy import DiscreteHomotopy
from .maps import SpaceMap
from .nerves import Cover
from .persist import FrameRecord
from .space_core import FiniteSpace, Point


def read_json(path) -> dict:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def dump_json(obj) -> str:
    """Stable serialization used for every structured report."""
    return json.dumps(obj, sort_keys=True, indent=2)


def _keys(obj: Any, what: str, required=(), optional=()) -> dict:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise InputError(f"{what}: unknown keys {unknown}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise InputError(f"{what}: missing keys {missing}")
    return obj


def _resolve(ref, base: Path | None) -> Path:
    p = Path(ref)
    return p if p.is_absolute() or base is None else base / p


def _real(v, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{what} must be a number")
    return float(v)


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{what} must be an integer")
    return v


def _xy(v, what: str) -> tuple[float, float]:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise InputError(f"{what} must be a pair of numbers")
    return (_real(v[0], what), _real(v[1], what))


# spaces


def space_from_dict(data: dict, *, descriptive: bool | None = None, eps_spatial=None, eps_desc=None):
    """A FiniteSpace, or a DescriptiveSpace when every point carries ``phi``.

    ``descriptive=True`` demands probe vectors (MissingProbe otherwise);
    ``descriptive=False`` ignores them.
    """
    _keys(data, "space", required=("points",), optional=("eps_spatial", "eps_desc"))
    points, feats = [], {}
    if not isinstance(data["points"], list) or not data["points"]:
        raise InputError("space: 'points' must be a nonempty list")
    for k, entry in enumerate(data["points"]):
        _keys(entry, f"point {k}", required=("id", "xy"), optional=("phi",))
        pid = _int(entry["id"], f"point {k} id")
        points.append(Point(pid, _xy(entry["xy"], f"point {pid} xy")))
        if "phi" in entry:
            phi = entry["phi"]
            if not isinstance(phi, list) or not phi:
                raise InputError(f"point {pid}: 'phi' must be a nonempty list")
            feats[pid] = tuple(_real(v, f"point {pid} phi") for v in phi)
    eps = _real(data.get("eps_spatial", 0.0), "eps_spatial") if eps_spatial is None else float(eps_spatial)
    base = FiniteSpace(tuple(points), eps)
    has_all = len(feats) == len(points)
    if descriptive is False or (descriptive is None and not has_all):
        return base
    if not has_all:
        raise MissingProbe(f"points {sorted(set(base.ids) - set(feats))} have no 'phi'")
    dims = {len(v) for v in feats.values()}
    if len(dims) != 1:
        raise InputError("all 'phi' vectors must have the same length")
    ed = _real(data.get("eps_desc", 0.0), "eps_desc") if eps_desc is None else float(eps_desc)
    return DescriptiveSpace(base, ProbeTable(dims.pop(), feats), ed)


def load_space(path, **kw):
    return space_from_dict(read_json(path), **kw)


def space_to_dict(space) -> dict:
    base = space.base if isinstance(space, DescriptiveSpace) else space
    out = {"eps_spatial": base.eps_spatial, "points": []}
    for p in base.points:
        entry = {"id": p.id, "xy": list(p.coords)}
        if isinstance(space, DescriptiveSpace):
            entry["phi"] = list(space.describe(p.id))
        out["points"].append(entry)
    if isinstance(space, DescriptiveSpace):
        out["eps_desc"] = space.eps_desc
    return out


# maps and homotopies


def _assignment(pairs, what: str) -> dict[int, int]:
    if not isinstance(pairs, list):
        raise InputError(f"{what} must be a list of [source, target] pairs")
    out = {}
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError(f"{what}: each entry must be a [source, target] pair")
        src = _int(pair[0], what)
        if src in out:
            raise InputError(f"{what}: point {src} assigned twice")
        out[src] = _int(pair[1], what)
    return out


def load_map(path, **space_kw) -> SpaceMap:
    path = Path(path)
    data = _keys(read_json(path), "map", required=("source", "target", "assignment"))
    src = load_space(_resolve(data["source"], path.parent), **space_kw)
    tgt = load_space(_resolve(data["target"], path.parent), **space_kw)
    return SpaceMap(src, tgt, _assignment(data["assignment"], "assignment"))


def map_to_dict(f: SpaceMap, source: str, target: str) -> dict:
    return {"source": source, "target": target, "assignment": [[k, v] for k, v in sorted(f.assignment.items())]}


def load_homotopy(path, **space_kw) -> tuple[DiscreteHomotopy, dict]:
    """Homotopy plus its options (``rel`` fixed ids, ``eps_time``)."""
    path = Path(path)
    data = _keys(
        read_json(path),
        "homotopy",
        required=("source", "target", "frames"),
        optional=("time_grid", "rel", "eps_time"),
    )
    src = load_space(_resolve(data["source"], path.parent), **space_kw)
    tgt = load_space(_resolve(data["target"], path.parent), **space_kw)
    if not isinstance(data["frames"], list) or not data["frames"]:
        raise InputError("homotopy: 'frames' must be a nonempty list")
    frames = tuple(SpaceMap(src, tgt, _assignment(fr, f"frame {k}")) for k, fr in enumerate(data["frames"]))
    grid = data.get("time_grid")
    if grid is not None:
        grid = [_real(t, "time_grid") for t in grid]
    options = {
        "rel": None if data.get("rel") is None else [_int(v, "rel") for v in data["rel"]],
        "eps_time": None if data.get("eps_time") is None else _real(data["eps_time"], "eps_time"),
    }
    return DiscreteHomotopy(frames, grid), options


# cycles, systems, shapes


def cycle_from_dict(data: dict) -> PathCycle:
    _keys(data, "cycle", required=("vertices", "edges"))
    verts = []
    for k, v in enumerate(data["vertices"]):
        _keys(v, f"vertex {k}", required=("id", "xy"))
        verts.append((_int(v["id"], "vertex id"), _xy(v["xy"], "vertex xy")))
    edges = []
    for k, e in enumerate(data["edges"]):
        _keys(e, f"edge {k}", required=("from", "to"), optional=("polyline",))
        pos = dict(verts)
        a, b = _int(e["from"], "edge from"), _int(e["to"], "edge to")
        if "polyline" in e:
            line = tuple(_xy(p, f"edge {k} polyline") for p in e["polyline"])
        elif a in pos and b in pos:
            line = (pos[a], pos[b])
        else:
            raise InputError(f"edge {k} joins unknown vertices and has no polyline")
        edges.append(PathEdge(a, b, line))
    return PathCycle(tuple(verts), tuple(edges))


def cycle_to_dict(c: PathCycle) -> dict:
    return {
        "vertices": [{"id": v, "xy": list(xy)} for v, xy in c.vertices],
        "edges": [{"from": e.from_v, "to": e.to_v, "polyline": [list(p) for p in e.polyline]} for e in c.edges],
    }


def system_from_dict(data: dict) -> CycleSystem:
    _keys(data, "system", required=("cycles",))
    if not isinstance(data["cycles"], list):
        raise InputError("system: 'cycles' must be a list")
    return CycleSystem(tuple(cycle_from_dict(c) for c in data["cycles"]))


def system_to_dict(sys: CycleSystem) -> dict:
    return {"cycles": [cycle_to_dict(c) for c in sys.cycles]}


def shape_from_dict(data: dict) -> PathCycle | CycleSystem:
    """A cycle object or a system object, told apart by their keys."""
    if isinstance(data, dict) and "cycles" in data:
        return system_from_dict(data)
    return cycle_from_dict(data)


def load_shape(path) -> PathCycle | CycleSystem:
    return shape_from_dict(read_json(path))


def as_system(shape: PathCycle | CycleSystem) -> CycleSystem:
    return shape if isinstance(shape, CycleSystem) else CycleSystem((shape,))


# covers


def load_cover(path, **space_kw) -> Cover:
    """Cover over a space file (ids are point ids) or a cycle/system file (ids are vertex ids).

    Over a system, an element may also be ``{"cycle": k}``, meaning the
    vertices of the k-th member cycle.
    """
    path = Path(path)
    data = _keys(read_json(path), "cover", required=("universe", "elements"))
    uni = read_json(_resolve(data["universe"], path.parent))
    if not isinstance(data["elements"], list) or not data["elements"]:
        raise InputError("cover: 'elements' must be a nonempty list")
    if "points" in uni:
        space = space_from_dict(uni, **space_kw)
        elements = [_id_list(e, k) for k, e in enumerate(data["elements"])]
        return Cover(tuple(elements), space.carrier, space=space)
    shape = shape_from_dict(uni)
    if isinstance(shape, CycleSystem):
        graph, parts = system_realization(shape)
    else:
        graph, parts = to_graph(shape), [frozenset(shape.ids)]
    elements = []
    for k, e in enumerate(data["elements"]):
        if isinstance(e, dict):
            _keys(e, f"element {k}", required=("cycle",))
            idx = _int(e["cycle"], "cycle reference")
            if not 0 <= idx < len(parts):
                raise InputError(f"element {k}: no cycle {idx}")
            elements.append(parts[idx])
        else:
            elements.append(_id_list(e, k))
    return Cover(tuple(elements), graph.vertices, graph=graph)


def _id_list(e, k) -> frozenset:
    if not isinstance(e, list) or not e:
        raise InputError(f"element {k} must be a nonempty list of ids")
    return frozenset(_int(v, f"element {k}") for v in e)


# frame sequences


def load_frames(path) -> tuple[list[FrameRecord], float | None]:
    path = Path(path)
    data = _keys(read_json(path), "frame sequence", required=("frames",), optional=("fps",))
    fps = None if data.get("fps") is None else _real(data["fps"], "fps")
    if fps is not None and fps <= 0:
        raise InputError("fps must be positive")
    frames = []
    for k, fr in enumerate(data["frames"]):
        _keys(fr, f"frame {k}", required=("index", "shapes"), optional=("t", "aux"))
        shapes = []
        for s in fr["shapes"]:
            obj = read_json(_resolve(s, path.parent)) if isinstance(s, str) else s
            shapes.append(as_system(shape_from_dict(obj)))
        index = _int(fr["index"], "frame index")
        t = _real(fr["t"], "frame t") if "t" in fr else (index / fps if fps else float(index))
        aux = fr.get("aux")
        if aux is not None:
            aux = tuple(None if v is None else _int(v, "aux vertex") for v in aux)
        frames.append(FrameRecord(index, t, tuple(shapes), aux))
    return frames, fps

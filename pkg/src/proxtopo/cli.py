"""Command-line front end: ``proxtopo <subcommand> FILE [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
unusable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .cycles import (
    CycleSystem,
    betti_graph,
    free_group_presentation,
    to_graph,
    validate_cycle,
    validate_system,
)
from .descriptive import DescriptiveSpace, check_descriptive_axioms
from .errors import Disconnected, ProxTopoError
from .homotopy import verify_homotopy
from .jordan import PlanarCurve, jordan_check, region_count
from .maps import check_continuity, glue, is_degenerate_descriptive_constant
from .nerves import betti_complex, nerve, nerve_theorem_check
from .persist import track
from .render import labeling_svg, nerve_svg
from .space_core import check_cech_axioms

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _trials(value: str):
    if value == "exhaustive":
        return value
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("--trials takes a positive integer or 'exhaustive'") from None
    if n < 1:
        raise argparse.ArgumentTypeError("--trials must be positive")
    return n


def _nonneg(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a real number, got {value!r}") from None
    if not x >= 0:
        raise argparse.ArgumentTypeError("expected a nonnegative number")
    return x


def _ids(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ids, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_trials, default=1000)
    common.add_argument("--eps", type=_nonneg, help="override eps_spatial (persist: matching tolerance)")
    common.add_argument("--eps-desc", type=_nonneg)
    common.add_argument("--eps-time", type=_nonneg)
    common.add_argument("--resolution", type=_nonneg)
    common.add_argument("--svg", metavar="PATH")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--mode", choices=("spatial", "descriptive", "degenerate"))
    common.add_argument("--include-singletons", choices=("on", "off"), default="on")

    parser = argparse.ArgumentParser(prog="proxtopo", description="Proximity-topology checks on finite planar data.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, helptext in (
        ("axioms", "proximity axiom reports for a space file"),
        ("continuity", "continuity witness for a map file"),
        ("homotopy", "verify a homotopy file"),
        ("cycle", "validate a cycle or system file and report Betti numbers"),
        ("nerve", "nerve, good-cover test and Betti comparison for a cover file"),
        ("jordan", "Jordan-curve report for a cycle or system file"),
        ("persist", "persistence tracks for a frame-sequence file"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input")
    g = sub.add_parser("glue", parents=[common], help="glue two maps along closed subsets")
    g.add_argument("first_map")
    g.add_argument("second_map")
    g.add_argument("--a", type=_ids, required=True, help="ids of the first closed subset")
    g.add_argument("--b", type=_ids, required=True, help="ids of the second closed subset")
    g.add_argument("--out", metavar="PATH", help="write the glued map file here")
    return parser


def _space_kw(args, descriptive=None) -> dict:
    return {"descriptive": descriptive, "eps_spatial": args.eps, "eps_desc": args.eps_desc}


def _exhaustive(args):
    return True if args.trials == "exhaustive" else None


def _trial_count(args) -> int:
    return 1000 if args.trials == "exhaustive" else args.trials


# subcommands return (passed, report dict, text lines)


def cmd_axioms(args):
    space = io.load_space(args.input, **_space_kw(args, True if args.mode == "descriptive" else None))
    reports = {}
    base = space.base if isinstance(space, DescriptiveSpace) else space
    reports["cech"] = check_cech_axioms(base, _trial_count(args), args.seed, exhaustive=_exhaustive(args))
    if isinstance(space, DescriptiveSpace):
        reports["descriptive"] = check_descriptive_axioms(
            space, _trial_count(args), args.seed, exhaustive=_exhaustive(args)
        )
    passed = all(r.passed for r in reports.values())
    lines = []
    for name, r in reports.items():
        for ax, res in r.results.items():
            lines.append(f"{name} {ax}: {'pass' if res.passed else 'FAIL'} ({res.checked} checked, {res.violations} violations)")
    return passed, {"passed": passed, "reports": {k: v.to_dict() for k, v in reports.items()}}, lines


def cmd_continuity(args):
    mode = args.mode or "spatial"
    f = io.load_map(args.input, **_space_kw(args, True if mode != "spatial" else None))
    if mode == "degenerate":
        v = is_degenerate_descriptive_constant(f)
        report = {"mode": mode, "degenerate": v.degenerate, "ordinary": v.ordinary}
        return v.degenerate, report, [f"degenerate: {'yes' if v.degenerate else 'no'}", f"ordinary constant: {'yes' if v.ordinary else 'no'}"]
    w = check_continuity(f, mode, _trial_count(args), args.seed, _exhaustive(args))
    lines = [f"{mode} continuity: {'yes' if w.verdict else 'no'} ({w.method}, {w.checked} pairs)"]
    if not w.verdict:
        a, b = (sorted(s) for s in w.counterexample)
        lines.append(f"counterexample: {a} near {b}, images not near")
    return w.verdict, w.to_dict(), lines


def cmd_glue(args):
    mode = args.mode or "spatial"
    kw = _space_kw(args, True if mode != "spatial" else None)
    f = io.load_map(args.first_map, **kw)
    g = io.load_map(args.second_map, **kw)
    try:
        h = glue(f, g, args.a, args.b, mode)
    except ProxTopoError as exc:
        report = {"passed": False, "error": type(exc).__name__, "message": str(exc)}
        return False, report, [f"glue rejected: {type(exc).__name__}: {exc}"]
    w = check_continuity(h, mode, _trial_count(args), args.seed, _exhaustive(args))
    src = json.loads(Path(args.first_map).read_text(encoding="utf-8"))
    glued = io.map_to_dict(h, src["source"], src["target"])
    if args.out:
        Path(args.out).write_text(io.dump_json(glued) + "\n", encoding="utf-8")
    report = {"passed": w.verdict, "map": glued, "continuity": w.to_dict()}
    return w.verdict, report, [f"glued map on {len(h.assignment)} points; continuity: {'yes' if w.verdict else 'no'}"]


def cmd_homotopy(args):
    mode = args.mode or "spatial"
    h, opts = io.load_homotopy(args.input, **_space_kw(args, True if mode != "spatial" else None))
    eps_time = args.eps_time if args.eps_time is not None else opts["eps_time"]
    try:
        w = verify_homotopy(h, h.frames[0], h.frames[-1], mode, opts["rel"], eps_time)
    except ProxTopoError as exc:
        return False, {"passed": False, "error": type(exc).__name__, "message": str(exc)}, [f"rejected: {exc}"]
    lines = [f"homotopy ({len(h.frames)} frames): {'verified' if w.verdict else 'not continuous'}"]
    if not w.verdict:
        lines.append(f"counterexample: {[sorted(s) for s in w.counterexample]}")
    return w.verdict, w.to_dict(), lines


def _graph_summary(g) -> dict:
    b = betti_graph(g)
    out = {"V": len(g.vertices), "E": len(g.edges), "beta0": b.beta0, "beta1": b.beta1}
    try:
        out["presentation"] = free_group_presentation(g).to_dict()
    except Disconnected:
        out["presentation"] = None
    return out


def cmd_cycle(args):
    shape = io.load_shape(args.input)
    if isinstance(shape, CycleSystem):
        rep = validate_system(shape)
        report = {"kind": "system", "validation": rep.to_dict()}
        passed = rep.valid
    else:
        simple, multi = validate_cycle(shape, "simple"), validate_cycle(shape, "multi")
        passed = multi.valid
        report = {"kind": "cycle", "simple": simple.to_dict(), "multi": multi.to_dict()}
    if passed:
        report["graph"] = _graph_summary(to_graph(shape))
    report["passed"] = passed
    lines = [f"valid: {'yes' if passed else 'no'}"]
    if passed:
        g = report["graph"]
        lines.append(f"V={g['V']} E={g['E']} beta0={g['beta0']} beta1={g['beta1']}")
    else:
        issues = report["validation"]["issues"] if "validation" in report else report["multi"]["issues"]
        lines.extend(f"issue: {i}" for i in issues)
    return passed, report, lines


def cmd_nerve(args):
    mode = args.mode or "spatial"
    cover = io.load_cover(args.input, **_space_kw(args, True if mode != "spatial" else None))
    include = args.include_singletons == "on"
    max_dim = max(3, len(cover.elements) - 1)
    k = nerve(cover, "spatial" if mode == "spatial" else "descriptive", max_dim)
    hom = betti_complex(k)
    cmp = nerve_theorem_check(cover, mode, max_dim, include)
    good = cmp.good
    report = {
        "mode": mode,
        "nerve": k.to_dict(),
        "homology": hom.to_dict(),
        "comparison": cmp.to_dict(),
        "passed": good.good and cmp.equal,
    }
    if args.svg:
        Path(args.svg).write_text(nerve_svg(cover, k), encoding="utf-8")
    lines = [
        f"nerve: {len(k.faces(0))} vertices, {len(k.faces(1))} edges, {len(k.faces(2))} triangles",
        f"good cover ({mode}, singletons {'on' if include else 'off'}): {'yes' if good.good else 'no'}",
        f"nerve betti {tuple(cmp.nerve_betti)}, union betti {tuple(cmp.union_betti)}: {'equal' if cmp.equal else 'different'}",
        cmp.note,
    ]
    return report["passed"], report, lines


def cmd_jordan(args):
    shape = io.load_shape(args.input)
    rep = jordan_check(shape, resolution=args.resolution)
    report = rep.to_dict()
    curve = PlanarCurve.from_system(shape) if isinstance(shape, CycleSystem) else PlanarCurve.from_cycle(shape)
    lines = []
    for key, clause in sorted(rep.clauses.items()):
        if not clause.applicable:
            continue
        w = clause.witnesses
        members = w.get("members", [w])
        for m in members:
            common = m.get("common_boundary") or {}
            lines.append(
                f"regions: {m.get('regions')}, common boundary: {'yes' if common.get('common') else 'no'}"
            )
        lines.append(f"clause {key}: {'pass' if clause.passed else 'FAIL'}")
    lines.extend(rep.notes)
    if args.svg:
        Path(args.svg).write_text(labeling_svg(region_count(curve, args.resolution)), encoding="utf-8")
    return rep.passed, report, lines


def cmd_persist(args):
    frames, fps = io.load_frames(args.input)
    eps = 0.0 if args.eps is None else args.eps
    rep = track(frames, eps, fps)
    lines = ["track  betti  intervals  durations(s)"]
    for t in rep.tracks:
        ivs = ",".join(f"[{a},{b}]" for a, b in t.intervals)
        durs = ",".join(f"{d:g}" for d in t.durations)
        lines.append(f"{t.track_id:<6} {t.descriptor.betti:<6} {ivs}  {durs}")
    if any(rep.ambiguity):
        lines.append(f"ambiguous matches per frame step: {rep.ambiguity}")
    return True, rep.to_dict(), lines


COMMANDS = {
    "axioms": cmd_axioms,
    "continuity": cmd_continuity,
    "glue": cmd_glue,
    "homotopy": cmd_homotopy,
    "cycle": cmd_cycle,
    "nerve": cmd_nerve,
    "jordan": cmd_jordan,
    "persist": cmd_persist,
}


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        passed, report, lines = COMMANDS[args.subcommand](args)
    except ProxTopoError as exc:
        print(f"proxtopo {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "structured":
        out.write(io.dump_json(report) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def main(argv=None) -> None:
    sys.exit(run(argv))

"""Command-line interface. Output is JSON unless --human is given.

Exit codes: 0 success (and every expectation met), 1 expectation mismatch,
2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .atlas import atlas_names, group_info, load_atlas
from .chain import PermGroup
from .cosets import build_coset_graph, coset_action, double_coset
from .feasible import FeasibilityQuery, scan_feasible, verify_feasible
from .graph import read_graph, write_graph
from .harness import ScenarioError, list_scenarios, run_scenario
from .limits import CapExceeded
from .perm import format_cycles, parse_cycles
from .subgroups import NoStrategyError, census
from .symmetry import aut_report, is_s_arc_transitive, max_arc_transitivity

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, human: str | None = None) -> None:
    if args.human and human is not None:
        print(human)
    else:
        print(json.dumps(payload, indent=2, default=str))


def _class_subgroup(group: PermGroup, isotype: str, index: int, shards: int = 1):
    c = census(group, isotype, shards=shards)
    if not 0 <= index < c.class_count:
        raise UsageError(f"class index {index} out of range: {group.name} has {c.class_count} classes of {isotype}")
    return c.classes[index]


def cmd_atlas(args) -> int:
    names = atlas_names()
    _emit(args, {"groups": names}, "\n".join(names))
    return EXIT_OK


def cmd_group_info(args) -> int:
    info = group_info(args.name)
    human = "\n".join(f"{k}: {v}" for k, v in info.items())
    _emit(args, info, human)
    return EXIT_OK


def cmd_census(args) -> int:
    g = load_atlas(args.group)
    c = census(g, args.isotype, shards=args.shards)
    payload = c.to_json()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
    lines = [f"{c.ambient}: {c.class_count} class(es) of {c.target.name} [{c.strategy}]"]
    lines += [f"  {i}: {' '.join(h.generator_strings())}" for i, h in enumerate(c.classes)]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_feasible(args) -> int:
    g = load_atlas(args.group)
    h = _class_subgroup(g, args.isotype, args.class_index, args.shards)
    q = FeasibilityQuery(g, h, args.valency, class_index=args.class_index)
    report = scan_feasible(q, shards=args.shards, override_cap=args.override_cap)
    payload = report.to_json()
    human = (
        f"{report.feasible_count} feasible element(s) in {len(report.double_coset_classes)} double coset(s); "
        f"scanned {report.scanned_count} in {report.elapsed:.1f}s"
    )
    _emit(args, payload, human)
    return EXIT_OK


def cmd_build_graph(args) -> int:
    g = load_atlas(args.group)
    h = _class_subgroup(g, args.isotype, args.class_index)
    t = parse_cycles(args.element, g.degree)
    checks = verify_feasible(g, h, t, args.valency)
    if not checks["feasible"]:
        _emit(args, {"refused": True, "checks": checks}, f"element is not feasible: {checks}")
        return EXIT_USAGE
    cs = coset_action(g, h)
    graph = build_coset_graph(cs, double_coset(h, t))
    if args.sparse6:
        write_graph(graph, args.sparse6, "sparse6")
    if args.edges:
        write_graph(graph, args.edges, "edges")
    if args.group_out:
        with open(args.group_out, "w", encoding="utf-8") as fh:
            json.dump({"degree": cs.index, "generators": [format_cycles(p) for p in cs.action]}, fh)
    payload = {
        "vertices": graph.n,
        "edges": graph.edge_count(),
        "valency": graph.valency(),
        "connected": graph.is_connected(),
        "checks": checks,
    }
    _emit(args, payload, f"{graph.n} vertices, valency {graph.valency()}, connected={graph.is_connected()}")
    return EXIT_OK


def cmd_aut(args) -> int:
    graph = read_graph(args.graphfile)
    report = aut_report(graph)
    _emit(args, report, f"|Aut| = {report['order']}, max s = {report['max_s']}, stabilizer {report['stabilizer_type']}")
    return EXIT_OK


def _read_group(path: str) -> PermGroup:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = lines[0].split()
        if head[0] != "degree":
            raise UsageError("group file must be JSON or start with 'degree <n>'")
        data = {"degree": int(head[1]), "generators": lines[1:]}
    n = int(data["degree"])
    return PermGroup([parse_cycles(s, n) for s in data["generators"]], degree=n)


def cmd_sarc(args) -> int:
    graph = read_graph(args.graphfile)
    g = _read_group(args.groupfile)
    ok = is_s_arc_transitive(g, graph, args.s)
    payload = {"s": args.s, "s_arc_transitive": ok, "max_s": max_arc_transitivity(g, graph)}
    _emit(args, payload, f"{args.s}-arc-transitive: {ok} (max s = {payload['max_s']})")
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = list_scenarios(args.tier) if args.scenario == "all" else [args.scenario]
    verdicts = [run_scenario(sid, shards=args.shards, override_cap=args.override_cap) for sid in ids]
    payload = {"passed": all(v.passed for v in verdicts), "verdicts": [v.to_json() for v in verdicts]}
    _emit(args, payload, "\n".join(v.human() for v in verdicts))
    return EXIT_OK if payload["passed"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosetforge", description="Coset graphs, feasibility scans and arc-transitivity checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--human", action="store_true", help="human-readable output instead of JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    # the same flags after the subcommand; SUPPRESS keeps them from resetting the top-level values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("atlas", parents=[common], help="embedded groups")
    a.add_argument("action", choices=["list"])
    a.set_defaults(func=cmd_atlas)

    gi = sub.add_parser("group", parents=[common], help="group information")
    gi.add_argument("action", choices=["info"])
    gi.add_argument("name")
    gi.set_defaults(func=cmd_group_info)

    c = sub.add_parser("census", parents=[common], help="conjugacy classes of subgroups of a stabilizer type")
    c.add_argument("group")
    c.add_argument("isotype")
    c.add_argument("--json", metavar="OUT")
    c.add_argument("--shards", type=int, default=1)
    c.set_defaults(func=cmd_census)

    f = sub.add_parser("feasible", parents=[common], help="scan a group for feasible elements")
    f.add_argument("group")
    f.add_argument("isotype")
    f.add_argument("class_index", type=int)
    f.add_argument("--valency", type=int, default=4)
    f.add_argument("--shards", type=int, default=1)
    f.add_argument("--override-cap", action="store_true")
    f.set_defaults(func=cmd_feasible)

    b = sub.add_parser("build-graph", parents=[common], help="coset graph from a feasible element (1-based cycles)")
    b.add_argument("group")
    b.add_argument("isotype")
    b.add_argument("class_index", type=int)
    b.add_argument("element")
    b.add_argument("--valency", type=int, default=4)
    b.add_argument("--sparse6", metavar="OUT")
    b.add_argument("--edges", metavar="OUT")
    b.add_argument("--group-out", metavar="OUT", help="write the coset action as a group file")
    b.set_defaults(func=cmd_build_graph)

    au = sub.add_parser("aut", parents=[common], help="automorphism group of a graph file")
    au.add_argument("graphfile")
    au.set_defaults(func=cmd_aut)

    s = sub.add_parser("sarc", parents=[common], help="s-arc-transitivity of a group on a graph")
    s.add_argument("graphfile")
    s.add_argument("groupfile")
    s.add_argument("s", type=int)
    s.set_defaults(func=cmd_sarc)

    v = sub.add_parser("verify", parents=[common], help="run a verification scenario (or 'all')")
    v.add_argument("scenario")
    v.add_argument("--tier", choices=["core", "stretch"], default="core")
    v.add_argument("--shards", type=int, default=1)
    v.add_argument("--override-cap", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ScenarioError, KeyError, ValueError, CapExceeded, NoStrategyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"cosetforge: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

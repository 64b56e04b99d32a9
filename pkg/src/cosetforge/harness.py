"""Scenario runner: executes census / scan / build / aut / sarc / fixture steps
and compares the observations against tagged expectations stored in data files.

Every expectation must carry a provenance tag (PAPER, DERIVED or TRIVIAL);
files with untagged expectations are refused. Class indices are never
matched positionally: per-class results compare as multisets.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable

from .atlas import check_m11_regular as _m11_factorization
from .atlas import load_atlas, load_example_fixture, verify_index_table
from .chain import PermGroup, build_chain
from .cosets import CosetStructure, build_coset_graph, coset_action, double_coset
from .feasible import FeasibilityQuery, distinct_graph_candidates, scan_feasible, verify_feasible
from .graph import SimpleGraph
from .subgroups import SubgroupHandle, census, is_normal_in, iso_type
from .symmetry import are_isomorphic, automorphism_group, is_s_arc_transitive, stabilizer_type_of

logger = logging.getLogger(__name__)

TAGS = ("PAPER", "DERIVED", "TRIVIAL")
TIERS = ("core", "stretch")


class ScenarioError(ValueError):
    """Malformed or untagged scenario data."""


# --- scenario files -------------------------------------------------------------


def _scenario_dir():
    return resources.files("cosetforge.data").joinpath("scenarios")


def list_scenarios(tier: str | None = None) -> list[str]:
    out = []
    for entry in sorted(_scenario_dir().iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".json"):
            continue
        data = json.loads(entry.read_text(encoding="utf-8"))
        if tier is None or data.get("tier") == tier:
            out.append(data["id"])
    return out


def load_scenario(scenario_id: str) -> dict:
    path = _scenario_dir().joinpath(f"{scenario_id}.json")
    if not path.is_file():
        raise ScenarioError(f"unknown scenario {scenario_id!r}")
    data = json.loads(path.read_text(encoding="utf-8"))
    validate_scenario(data)
    return data


def validate_scenario(data: dict) -> None:
    for key in ("id", "tier", "steps"):
        if key not in data:
            raise ScenarioError(f"scenario missing {key!r}")
    if data["tier"] not in TIERS:
        raise ScenarioError(f"unknown tier {data['tier']!r}")
    for i, step in enumerate(data["steps"]):
        if step.get("op") not in STEPS:
            raise ScenarioError(f"step {i}: unknown op {step.get('op')!r}")
        for key, exp in step.get("expect", {}).items():
            if not isinstance(exp, dict) or "value" not in exp:
                raise ScenarioError(f"step {i}: expectation {key!r} needs a value")
            tag = str(exp.get("tag", ""))
            if tag.split(":", 1)[0].strip() not in TAGS:
                raise ScenarioError(f"step {i}: expectation {key!r} has no provenance tag")
            if exp.get("match", "exact") not in ("exact", "multiset"):
                raise ScenarioError(f"step {i}: unknown match mode {exp.get('match')!r}")


# --- verdicts ---------------------------------------------------------------------


@dataclass
class Check:
    step: int
    op: str
    key: str
    expected: Any
    observed: Any
    tag: str
    ok: bool

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "op": self.op,
            "key": self.key,
            "expected": self.expected,
            "observed": self.observed,
            "tag": self.tag,
            "ok": self.ok,
        }


@dataclass
class Verdict:
    scenario: str
    tier: str
    checks: list = field(default_factory=list)
    observations: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "tier": self.tier,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "observations": self.observations,
            "errors": self.errors,
            "wall_time": round(self.elapsed, 3),
        }

    def human(self) -> str:
        lines = [f"{self.scenario} [{self.tier}]: {'PASS' if self.passed else 'FAIL'} ({self.elapsed:.1f}s)"]
        for c in self.checks:
            mark = "ok " if c.ok else "BAD"
            lines.append(f"  {mark} step {c.step} {c.op}.{c.key}: expected {c.expected!r}, got {c.observed!r}  [{c.tag}]")
        for e in self.errors:
            lines.append(f"  ERR {e}")
        for k, v in self.observations.items():
            lines.append(f"  note {k}: {v!r}")
        return "\n".join(lines)


def _matches(expected: Any, observed: Any, mode: str) -> bool:
    if mode == "multiset":
        try:
            return sorted(expected) == sorted(observed)
        except TypeError:
            return False
    return expected == observed


# --- run context --------------------------------------------------------------------


@dataclass
class _Built:
    cs: CosetStructure
    graph: SimpleGraph
    image: PermGroup
    class_index: int


class _Context:
    def __init__(self, scenario: dict, shards: int, override_cap: bool):
        self.scenario = scenario
        self.shards = shards
        self.override_cap = override_cap
        self.group_name = scenario.get("group")
        self._group: PermGroup | None = None
        self.censuses: dict = {}
        self.scans: dict = {}
        self.built: _Built | None = None
        self.aut = None
        self.observations: dict = {}

    @property
    def group(self) -> PermGroup:
        if self._group is None:
            if not self.group_name:
                raise ScenarioError("scenario has no group")
            self._group = load_atlas(self.group_name)
        return self._group

    def census_of(self, t: str):
        if t not in self.censuses:
            self.censuses[t] = census(self.group, t, shards=self.shards)
        return self.censuses[t]

    def scans_of(self, t: str, valency: int = 4):
        if t not in self.scans:
            c = self.census_of(t)
            reports = []
            for i, h in enumerate(c.classes):
                q = FeasibilityQuery(self.group, h, valency, class_index=i)
                reports.append(scan_feasible(q, shards=self.shards, override_cap=self.override_cap))
            self.scans[t] = reports
        return self.scans[t]


def _step_census(ctx: _Context, step: dict) -> dict:
    c = ctx.census_of(step["type"])
    return {"class_count": c.class_count, "strategy": c.strategy}


def _step_scan(ctx: _Context, step: dict) -> dict:
    reports = ctx.scans_of(step["type"], step.get("valency", 4))
    return {
        "feasible_counts": [r.feasible_count for r in reports],
        "double_coset_counts": [len(r.double_coset_classes) for r in reports],
        "max_feasible_order": max((r.max_feasible_order for r in reports), default=0),
        "order_above_64": any(r.exceeds_order_flag for r in reports),
        "scanned": [r.scanned_count for r in reports],
    }


def _step_build(ctx: _Context, step: dict) -> dict:
    """Build the coset graph for the class whose feasible count is ``feasible_count``."""
    t = step["type"]
    reports = ctx.scans_of(t)
    want = step["feasible_count"]
    idx = next((i for i, r in enumerate(reports) if r.feasible_count == want), None)
    if idx is None:
        raise ScenarioError(f"no class of {t} with {want} feasible elements")
    report = reports[idx]
    h = ctx.census_of(t).classes[idx]
    cs = coset_action(ctx.group, h)
    graphs = []
    for g in distinct_graph_candidates(report):
        graphs.append(build_coset_graph(cs, double_coset(h, g)))
    # equal double cosets give literally equal graphs, so only distinct ones need an isomorphism test
    iso = all(are_isomorphic(graphs[0], other) is not None for other in graphs[1:])
    graph = graphs[0]
    image = cs.image_group(name=f"{ctx.group_name} on cosets")
    ctx.built = _Built(cs, graph, image, idx)
    return {
        "vertices": graph.n,
        "valency": graph.valency(),
        "connected": graph.is_connected(),
        "graphs_from_class": report.feasible_count,
        "distinct_double_cosets": len(graphs),
        "pairwise_isomorphic": iso,
        "image_order": image.order(),
        "image_transitive": image.is_transitive(),
    }


def _need_built(ctx: _Context) -> _Built:
    if ctx.built is None:
        raise ScenarioError("step requires an earlier build step")
    return ctx.built


def _step_sarc(ctx: _Context, step: dict) -> dict:
    b = _need_built(ctx)
    return {f"s{s}": is_s_arc_transitive(b.image, b.graph, s) for s in step.get("s", [1, 2, 3])}


def _step_aut(ctx: _Context, step: dict) -> dict:
    b = _need_built(ctx)
    res = automorphism_group(b.graph, cap=max(b.graph.n, 1))
    ctx.aut = res.group
    image_h = SubgroupHandle(res.group, b.image.generators, order=b.image.order())
    finding = stabilizer_type_of(res.group, b.graph)
    ctx.observations["aut_vertex_stabilizer"] = finding.stabilizer.name
    ctx.observations["aut_max_s"] = finding.max_s
    return {
        "aut_order": res.group.order(),
        "image_normal": is_normal_in(image_h, res.group),
        "image_index": res.group.order() // b.image.order(),
    }


def m11_regular_direct(cs: CosetStructure, m12: PermGroup) -> bool:
    """M11 regular on the cosets, decided by computing its image in the coset action."""
    m11 = m12.point_stabilizer(m12.degree - 1)
    images = [cs.act(p) for p in m11.generators]
    img = PermGroup(images, degree=cs.index)
    if not img.is_transitive():
        return False
    # the image is a quotient of M11, so |M11| bounds its order
    return build_chain(images, cs.index, order_bound=m11.order()).order() == cs.index


def check_m11_regular(graph: SimpleGraph, aut: PermGroup | None, t: PermGroup, cs: CosetStructure) -> bool:
    """Both routes to M11-regularity on an M12 coset graph; they must agree."""
    if graph.n != cs.index or t.degree != graph.n:
        raise ValueError("graph is not the coset graph of this coset structure")
    for p in t.generators:
        if not graph.is_automorphism(p):
            raise ValueError("M12 image does not act on the graph")
    if aut is not None and not all(aut.contains(p) for p in t.generators):
        raise ValueError("automorphism group does not contain the M12 image")
    by_factor = _m11_factorization(cs.subgroup, cs.ambient)
    direct = m11_regular_direct(cs, cs.ambient)
    if by_factor != direct:
        raise AssertionError(f"M11 regularity routes disagree: factorization {by_factor}, direct {direct}")
    return by_factor


def _step_m11(ctx: _Context, step: dict) -> dict:
    b = _need_built(ctx)
    return {"m11_regular": check_m11_regular(b.graph, ctx.aut, b.image, b.cs)}


def _step_fixture(ctx: _Context, step: dict) -> dict:
    fx = load_example_fixture()
    h = fx.h
    hg = h.as_group()
    checks = [verify_feasible(fx.group, h, g) for g in fx.candidates]
    # distinctness of the double cosets is recorded, not claimed
    dcs = [double_coset(h, g) for g in fx.candidates]
    distinct = all(not dcs[i].contains(dcs[j].g) for i in range(len(dcs)) for j in range(i + 1, len(dcs)))
    ctx.observations["double_cosets_pairwise_distinct"] = distinct
    ctx.observations["candidate_checks"] = checks
    return {
        "h_order": h.order(),
        "h_type": iso_type(h).name,
        "h_regular": hg.is_transitive() and h.order() == fx.group.degree,
        "two_element": [c["two_element"] for c in checks],
        "square_in_h": [c["square_in_h"] for c in checks],
        "index": [c["index"] for c in checks],
        "generated_order": [c["generated_order"] for c in checks],
        "feasible": [c["feasible"] for c in checks],
    }


def _step_index_table(ctx: _Context, step: dict) -> dict:
    rows = verify_index_table()
    bad = [f"{r['T']}/{r['G']}" for r in rows if not r["ok"]]
    return {"rows": len(rows), "all_ok": not bad, "failing_rows": bad}


def _step_presentation(ctx: _Context, step: dict) -> dict:
    from .fp import sevenarc_presentation, sevenarc_realization, todd_coxeter, verify_remark_claims

    g, conv = sevenarc_realization()
    ct = todd_coxeter(sevenarc_presentation(conv))
    report = verify_remark_claims(g)
    ctx.observations["convention"] = conv
    ctx.observations["normal_subgroup_orders"] = report["normal_subgroup_orders"]
    return {
        "cosets_trivial_subgroup": ct.index if ct.complete else None,
        "order": g.order(),
        "confirmed": report["confirmed"],
    }


STEPS: dict[str, Callable[[_Context, dict], dict]] = {
    "census": _step_census,
    "scan": _step_scan,
    "build": _step_build,
    "sarc": _step_sarc,
    "aut": _step_aut,
    "m11": _step_m11,
    "fixture": _step_fixture,
    "index-table": _step_index_table,
    "presentation": _step_presentation,
}


def run_scenario(scenario_id: str, shards: int = 1, override_cap: bool = False) -> Verdict:
    """Run every step of a scenario and compare observations with its expectations."""
    data = load_scenario(scenario_id)
    ctx = _Context(data, shards, override_cap)
    verdict = Verdict(data["id"], data["tier"])
    t0 = time.perf_counter()
    for i, step in enumerate(data["steps"]):
        op = step["op"]
        try:
            observed = STEPS[op](ctx, step)
        except Exception as exc:  # reported with context, the remaining steps still run
            logger.exception("step %d (%s) failed", i, op)
            verdict.errors.append(f"step {i} ({op}): {type(exc).__name__}: {exc}")
            continue
        for key, exp in step.get("expect", {}).items():
            mode = exp.get("match", "exact")
            got = observed.get(key)
            verdict.checks.append(Check(i, op, key, exp["value"], got, exp["tag"], _matches(exp["value"], got, mode)))
    verdict.observations = ctx.observations
    verdict.elapsed = time.perf_counter() - t0
    return verdict


__all__ = [
    "ScenarioError",
    "Verdict",
    "Check",
    "list_scenarios",
    "load_scenario",
    "validate_scenario",
    "run_scenario",
    "check_m11_regular",
    "m11_regular_direct",
    "TAGS",
]

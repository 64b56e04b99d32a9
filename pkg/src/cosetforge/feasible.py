"""Search for feasible elements: 2-elements g with g^2 in H, |H : H meet H^g|
equal to the valency, and <H, g> = G.

Elements of G are streamed as stabilizer-chain transversal products, never
stored. Filters run cheapest first; the generation test builds a fresh
chain only for the rare survivors.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import limits
from .chain import PermGroup, build_chain
from .cosets import canonical_rep, double_coset
from .limits import CapExceeded
from .perm import Permutation, conjugate, format_cycles, inverse, is_two_element, mul, order_of
from .subgroups import SubgroupHandle

ORDER_FLAG = 64  # element orders above this are reported, not filtered


@dataclass
class FeasibilityQuery:
    ambient: PermGroup
    subgroup: SubgroupHandle
    valency: int = 4
    class_index: int | None = None

    def __post_init__(self):
        if self.subgroup.order() % self.valency:
            raise ValueError(f"valency {self.valency} does not divide |H| = {self.subgroup.order()}")


@dataclass
class FeasibilityReport:
    query: FeasibilityQuery
    feasible_elements: list = field(default_factory=list)
    double_coset_classes: list = field(default_factory=list)  # lists of indices into feasible_elements
    scanned_count: int = 0
    elapsed: float = 0.0
    max_feasible_order: int = 0

    @property
    def feasible_count(self) -> int:
        return len(self.feasible_elements)

    @property
    def exceeds_order_flag(self) -> bool:
        return self.max_feasible_order > ORDER_FLAG

    def to_json(self) -> dict:
        q = self.query
        return {
            "group": q.ambient.name,
            "class_index": q.class_index,
            "subgroup_generators": q.subgroup.generator_strings(),
            "valency": q.valency,
            "feasible_count": self.feasible_count,
            "feasible_elements": [format_cycles(g) for g in self.feasible_elements],
            "double_coset_class_sizes": [len(c) for c in self.double_coset_classes],
            "scanned_count": self.scanned_count,
            "max_feasible_order": self.max_feasible_order,
            "order_above_64": self.exceeds_order_flag,
            "wall_time": round(self.elapsed, 3),
        }


def _edge_stabilizer_order(h_elements: Sequence[tuple], hset: frozenset, g: tuple) -> int:
    # x lies in H^g = g^-1 H g exactly when g x g^-1 lies in H
    ginv = inverse(g)
    return sum(1 for x in h_elements if conjugate(x, ginv) in hset)


def _generates(ambient_order: int, h_gens: Sequence[tuple], g: tuple, degree: int) -> bool:
    chain = build_chain(list(h_gens) + [g], degree, order_bound=ambient_order)
    return chain.order() == ambient_order


def _scan_shard(args) -> tuple[list[tuple], int]:
    degree, g_gens, g_order, base_prefix, h_gens, h_elements, valency, top = args
    chain = build_chain(g_gens, degree, base_prefix=base_prefix, known_order=g_order)
    hset = frozenset(h_elements)
    target = len(h_elements) // valency
    found = []
    scanned = 0
    for g in chain.iter_elements(top):
        scanned += 1
        if not is_two_element(g):
            continue
        if mul(g, g) not in hset:
            continue
        if _edge_stabilizer_order(h_elements, hset, g) != target:
            continue
        if not _generates(g_order, h_gens, g, degree):
            continue
        found.append(g)
    return found, scanned


def scan_feasible(
    q: FeasibilityQuery,
    shards: int = 1,
    scan_cap: int = limits.SCAN_CAP,
    override_cap: bool = False,
) -> FeasibilityReport:
    """Every feasible element of G for the subgroup H, by a complete scan."""
    g = q.ambient
    order = g.order()
    if order > scan_cap and not override_cap:
        raise CapExceeded(f"|G| = {order} exceeds scan cap {scan_cap}; pass override to scan anyway")
    t0 = time.perf_counter()
    h = q.subgroup
    h_elements = h.elements()
    h_gens = [tuple(x) for x in h.generators]
    g_gens = [tuple(x) for x in g.generators]
    base = tuple(g.chain.base)
    top_size = len(g.chain.levels[0].orbit) if g.chain.levels else 1
    shards = max(1, min(shards, top_size))
    parts = [list(range(i, top_size, shards)) for i in range(shards)]
    args = [(g.degree, g_gens, order, base, h_gens, h_elements, q.valency, p) for p in parts]
    if shards == 1:
        results = [_scan_shard(args[0])]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            results = list(pool.map(_scan_shard, args))
    found = sorted(x for part, _ in results for x in part)
    scanned = sum(s for _, s in results)
    if scanned != order:
        raise AssertionError(f"scanned {scanned} elements of a group of order {order}")
    elements = [Permutation(x, check=False) for x in found]
    report = FeasibilityReport(q, elements, group_by_double_coset(h, elements), scanned)
    report.max_feasible_order = max((order_of(x) for x in elements), default=0)
    report.elapsed = time.perf_counter() - t0
    return report


def group_by_double_coset(h: SubgroupHandle, elements: Sequence[Sequence[int]]) -> list[list[int]]:
    """Indices of ``elements`` grouped by equal double coset HgH, in first-seen order."""
    classes: dict = {}
    for i, x in enumerate(elements):
        dc = double_coset(h, x)
        key = frozenset(canonical_rep(h, d) for d in dc.right_coset_reps)
        classes.setdefault(key, []).append(i)
    return list(classes.values())


def distinct_graph_candidates(report: FeasibilityReport) -> list[Permutation]:
    """One feasible element per double coset: equal HgH give equal coset graphs."""
    return [report.feasible_elements[c[0]] for c in report.double_coset_classes]


def verify_feasible(g: PermGroup, h: SubgroupHandle, cand: Sequence[int], valency: int = 4) -> dict:
    """Evaluate every feasibility condition independently (no short-circuit)."""
    cand = tuple(cand)
    if len(cand) != g.degree:
        raise ValueError(f"degree mismatch: {len(cand)} vs {g.degree}")
    h_elements = h.elements()
    hset = h.element_set()
    k = _edge_stabilizer_order(h_elements, hset, cand)
    gen_order = build_chain(list(h.generators) + [cand], g.degree, order_bound=g.order()).order()
    checks = {
        "in_group": g.contains(cand),
        "two_element": is_two_element(cand),
        "square_in_h": mul(cand, cand) in hset,
        "index": h.order() // k,
        "index_ok": h.order() == k * valency,
        "generated_order": str(gen_order),
        "generates": gen_order == g.order(),
        "order": order_of(cand),
    }
    checks["feasible"] = all(checks[c] for c in ("in_group", "two_element", "square_in_h", "index_ok", "generates"))
    return checks


__all__ = [
    "FeasibilityQuery",
    "FeasibilityReport",
    "scan_feasible",
    "verify_feasible",
    "distinct_graph_candidates",
    "group_by_double_coset",
    "ORDER_FLAG",
]

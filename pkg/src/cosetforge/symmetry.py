"""Graph automorphisms and isomorphisms by partition refinement with
backtracking, and s-arc-transitivity tests.

Partitions are kept nauty-style: a vertex array ``lab`` whose cells are
contiguous segments, each cell named by its start position. Refinement is
deterministic given the cell structure, so traces of two search paths can be
compared to prune branches that cannot lead to an isomorphism.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from . import limits
from .chain import PermGroup, StabilizerChain
from .graph import SimpleGraph, is_connected
from .limits import CapExceeded
from .models import OTHER, TYPE_ARC_LEVEL, IsoType
from .perm import Permutation, format_cycles

logger = logging.getLogger(__name__)


class OrderedPartition:
    """Ordered partition of ``range(n)`` with cells as contiguous segments of ``lab``."""

    __slots__ = ("lab", "pos", "cell", "size")

    def __init__(self, lab: list[int], cell: list[int], size: dict[int, int]):
        self.lab = lab
        self.cell = cell  # vertex -> start of its cell
        self.size = size  # cell start -> cell length
        self.pos = [0] * len(lab)
        for i, v in enumerate(lab):
            self.pos[v] = i

    @classmethod
    def unit(cls, n: int) -> OrderedPartition:
        return cls(list(range(n)), [0] * n, {0: n} if n else {})

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence[int]]) -> OrderedPartition:
        lab, cell, size = [], [], {}
        n = sum(len(c) for c in cells)
        cell = [0] * n
        for c in cells:
            start = len(lab)
            size[start] = len(c)
            for v in c:
                cell[v] = start
            lab.extend(c)
        if sorted(lab) != list(range(n)):
            raise ValueError("cells do not partition the vertex set")
        return cls(lab, cell, size)

    def copy(self) -> OrderedPartition:
        p = OrderedPartition.__new__(OrderedPartition)
        p.lab = list(self.lab)
        p.pos = list(self.pos)
        p.cell = list(self.cell)
        p.size = dict(self.size)
        return p

    @property
    def cells(self) -> list[list[int]]:
        return [sorted(self.lab[s:s + self.size[s]]) for s in sorted(self.size)]

    def shape(self) -> tuple:
        return tuple(self.size[s] for s in sorted(self.size))

    def is_discrete(self) -> bool:
        return len(self.size) == len(self.lab)

    def target_cell(self) -> int | None:
        """Start of the first smallest non-singleton cell."""
        best = None
        for s in sorted(self.size):
            k = self.size[s]
            if k > 1 and (best is None or k < self.size[best]):
                best = s
        return best

    def individualize(self, v: int) -> int:
        """Split ``v`` off the front of its cell; return the start of the singleton."""
        s = self.cell[v]
        k = self.size[s]
        if k == 1:
            return s
        i = self.pos[v]
        u = self.lab[s]
        self.lab[s], self.lab[i] = v, u
        self.pos[v], self.pos[u] = s, i
        self.size[s] = 1
        self.size[s + 1] = k - 1
        for j in range(s + 1, s + k):
            self.cell[self.lab[j]] = s + 1
        return s


def refine(graph: SimpleGraph, part: OrderedPartition, splitters: Sequence[int] | None = None) -> list:
    """Refine ``part`` in place to the coarsest equitable refinement; return the trace."""
    adj = graph.adj
    lab, pos, cell, size = part.lab, part.pos, part.cell, part.size
    queue = deque(sorted(size) if splitters is None else splitters)
    inq = set(queue)
    trace = []
    while queue:
        w = queue.popleft()
        inq.discard(w)
        count: dict[int, int] = {}
        for x in lab[w:w + size[w]]:
            for y in adj[x]:
                count[y] = count.get(y, 0) + 1
        touched: dict[int, list[int]] = {}
        for y in count:
            touched.setdefault(cell[y], []).append(y)
        for s in sorted(touched):
            k = size[s]
            if k == 1:
                continue
            ys = touched[s]
            if len(ys) == k:
                first = count[ys[0]]
                if all(count[y] == first for y in ys):
                    continue
            groups: dict[int, list[int]] = {}
            for v in lab[s:s + k]:
                groups.setdefault(count.get(v, 0), []).append(v)
            if len(groups) == 1:
                continue
            keys = sorted(groups)
            frags = [groups[c] for c in keys]
            start = s
            starts = []
            for frag in frags:
                size[start] = len(frag)
                starts.append(start)
                for j, v in enumerate(frag):
                    lab[start + j] = v
                    pos[v] = start + j
                    cell[v] = start
                start += len(frag)
            trace.append((s, tuple((c, len(groups[c])) for c in keys)))
            if s in inq:
                for st in starts[1:]:
                    queue.append(st)
                    inq.add(st)
            else:
                big = max(range(len(frags)), key=lambda i: (len(frags[i]), -i))
                for i, st in enumerate(starts):
                    if i != big:
                        queue.append(st)
                        inq.add(st)
    return trace


@dataclass
class _Node:
    part: OrderedPartition
    trace: tuple


def _child(graph: SimpleGraph, part: OrderedPartition, v: int) -> _Node:
    p = part.copy()
    s = p.individualize(v)
    trace = refine(graph, p, [s])
    return _Node(p, (tuple(trace), p.shape()))


def _leaf_map(first: OrderedPartition, leaf: OrderedPartition) -> tuple:
    n = len(first.lab)
    img = [0] * n
    for a, b in zip(first.lab, leaf.lab):
        img[a] = b
    return tuple(img)


def _is_iso(g1: SimpleGraph, g2: SimpleGraph, m: Sequence[int]) -> bool:
    adj1, adj2 = g1.adj, g2.adj
    for v in range(g1.n):
        if tuple(sorted(m[u] for u in adj1[v])) != adj2[m[v]]:
            return False
    return True


def _first_path(graph: SimpleGraph, root: OrderedPartition):
    nodes = [_Node(root, ())]
    choices = []
    targets = []
    while not nodes[-1].part.is_discrete():
        part = nodes[-1].part
        t = part.target_cell()
        cell = part.lab[t:t + part.size[t]]
        v = min(cell)
        targets.append(sorted(cell))
        choices.append(v)
        nodes.append(_child(graph, part, v))
    return nodes, choices, targets


def _search(graph2: SimpleGraph, graph1: SimpleGraph, nodes1, level: int, part: OrderedPartition, first_leaf, budget):
    """DFS below ``part`` (matching first-path node ``level``) for a leaf giving an isomorphism."""
    if part.is_discrete():
        m = _leaf_map(first_leaf, part)
        return m if _is_iso(graph1, graph2, m) else None
    if level + 1 >= len(nodes1):
        return None
    t = part.target_cell()
    cell = sorted(part.lab[t:t + part.size[t]])
    want = nodes1[level + 1].trace
    for v in cell:
        budget[0] += 1
        child = _child(graph2, part, v)
        if child.trace != want:
            continue
        m = _search(graph2, graph1, nodes1, level + 1, child.part, first_leaf, budget)
        if m is not None:
            return m
    return None


@dataclass
class AutResult:
    group: PermGroup
    base: list
    generators: list
    nodes_visited: int

    def order(self) -> int:
        return self.group.order()


def automorphism_group(graph: SimpleGraph, cap: int = limits.AUT_CAP, partition: Sequence[Sequence[int]] | None = None) -> AutResult:
    """Automorphism group by refinement-guided backtracking.

    Along the first path (base w_1..w_k) each level's orbit is completed by
    searching, for every vertex of the level's target cell not yet in the
    orbit, for an automorphism fixing w_1..w_{i-1} and sending w_i there.
    The generators found form a strong generating set for that base, so
    the order comes from a stabilizer chain built directly from them.
    """
    n = graph.n
    if n > cap:
        raise CapExceeded(f"{n} vertices exceed the automorphism cap {cap}")
    root = OrderedPartition.unit(n) if partition is None else OrderedPartition.from_cells(partition)
    refine(graph, root)
    nodes, choices, targets = _first_path(graph, root)
    first_leaf = nodes[-1].part
    gens: list[tuple] = []
    budget = [0]
    k = len(choices)
    level_gens: list[list[tuple]] = [[] for _ in range(k)]
    for i in range(k - 1, -1, -1):
        # generators fixing w_1..w_{i-1}
        avail = [g for j in range(i, k) for g in level_gens[j]]
        orbit = _orbit(choices[i], avail)
        for u in targets[i]:
            if u in orbit:
                continue
            child = _child(graph, nodes[i].part, u)
            if child.trace != nodes[i + 1].trace:
                continue
            m = _search(graph, graph, nodes, i + 1, child.part, first_leaf, budget)
            if m is None:
                continue
            level_gens[i].append(m)
            avail.append(m)
            orbit = _orbit(choices[i], avail)
    for lg in level_gens:
        gens.extend(lg)
    for g in gens:
        if not graph.is_automorphism(g):
            raise AssertionError("backtrack produced a non-automorphism")
    if gens:
        chain = StabilizerChain.from_bsgs(n, choices, gens)
        group = PermGroup.from_chain(chain, [Permutation(g, check=False) for g in gens])
    else:
        group = PermGroup([], degree=n)
    return AutResult(group, list(choices), [Permutation(g, check=False) for g in gens], budget[0])


def _orbit(v: int, gens: Sequence[Sequence[int]]) -> set:
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def are_isomorphic(graph1: SimpleGraph, graph2: SimpleGraph, cap: int = limits.AUT_CAP) -> tuple | None:
    """A vertex bijection m with m(graph1) = graph2, verified; None if not isomorphic."""
    if graph1.n != graph2.n:
        return None
    if graph1.n > cap:
        raise CapExceeded(f"{graph1.n} vertices exceed the automorphism cap {cap}")
    if graph1.edge_count() != graph2.edge_count():
        return None
    if sorted(map(len, graph1.adj)) != sorted(map(len, graph2.adj)):
        return None
    if graph1.n == 0:
        return ()
    r1 = OrderedPartition.unit(graph1.n)
    t1 = refine(graph1, r1)
    r2 = OrderedPartition.unit(graph2.n)
    t2 = refine(graph2, r2)
    if t1 != t2 or r1.shape() != r2.shape():
        return None
    nodes, _, _ = _first_path(graph1, r1)
    m = _search(graph2, graph1, nodes, 0, r2, nodes[-1].part, [0])
    if m is not None and not _is_iso(graph1, graph2, m):
        raise AssertionError("isomorphism witness failed verification")
    return m


# --- s-arcs ------------------------------------------------------------------


def enumerate_s_arcs(graph: SimpleGraph, s: int, start: int | None = None):
    adj = graph.adj
    starts = range(graph.n) if start is None else [start]
    if s == 0:
        for v in starts:
            yield (v,)
        return
    stack = [(v,) for v in starts]
    while stack:
        arc = stack.pop()
        if len(arc) == s + 1:
            yield arc
            continue
        last = arc[-1]
        prev = arc[-2] if len(arc) > 1 else None
        for u in adj[last]:
            if u != prev:
                stack.append(arc + (u,))


def count_s_arcs(graph: SimpleGraph, s: int, enumerate_cap: int = limits.SARC_ENUM_CAP) -> int:
    d = graph.valency()
    if d is None:
        raise ValueError("graph is not regular")
    if s == 0:
        count = graph.n
    else:
        count = graph.n * d * (d - 1) ** (s - 1)
    if graph.n <= enumerate_cap:
        direct = sum(1 for _ in enumerate_s_arcs(graph, s))
        if direct != count:
            raise AssertionError(f"s-arc formula {count} disagrees with enumeration {direct}")
    return count


def _check_automorphisms(g: PermGroup, graph: SimpleGraph) -> None:
    if g.degree != graph.n:
        raise ValueError("group degree differs from vertex count")
    for p in g.generators:
        if not graph.is_automorphism(p):
            raise ValueError(f"generator {format_cycles(p)} is not an automorphism")


def s_arc_orbit_size(g: PermGroup, graph: SimpleGraph, s: int) -> int:
    """Size of the orbit of the least s-arc under ``g``."""
    first = next(enumerate_s_arcs(graph, s, start=0), None) if graph.n else None
    if first is None:
        return 0
    gens = [tuple(p) for p in g.generators]
    seen = {first}
    queue = [first]
    for arc in queue:
        for p in gens:
            img = tuple(p[v] for v in arc)
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return len(seen)


def is_s_arc_transitive(g: PermGroup, graph: SimpleGraph, s: int) -> bool:
    _check_automorphisms(g, graph)
    d = graph.valency()
    if d is None:
        return False
    total = graph.n if s == 0 else graph.n * d * (d - 1) ** (s - 1)
    if total == 0:
        return True
    return s_arc_orbit_size(g, graph, s) == total


def max_arc_transitivity(g: PermGroup, graph: SimpleGraph, limit: int = 8) -> int:
    """Largest s <= limit with g transitive on s-arcs; -1 if not even vertex-transitive."""
    best = -1
    for s in range(limit + 1):
        if not is_s_arc_transitive(g, graph, s):
            break
        best = s
    return best


@dataclass
class StabilizerFinding:
    stabilizer: IsoType
    stabilizer_order: int
    max_s: int
    consistent: bool
    note: str = ""


def stabilizer_type_of(g: PermGroup, graph: SimpleGraph, cap: int = limits.ELEMENT_CAP) -> StabilizerFinding:
    """Vertex-stabilizer type and arc-transitivity level, checked against the known table."""
    from .subgroups import SubgroupHandle, iso_type

    if not g.is_transitive():
        raise ValueError("group is not vertex-transitive")
    stab = g.point_stabilizer(0)
    h = SubgroupHandle(None, stab.generators, degree=g.degree)
    h._chain = stab.chain
    t = iso_type(h, cap) if stab.order() <= cap else IsoType(OTHER, stab.order())
    s = max_arc_transitivity(g, graph)
    consistent = True
    note = ""
    if s >= 2 and graph.valency() == 4 and is_connected(graph):
        expected = TYPE_ARC_LEVEL.get(t.name)
        consistent = expected == s
        if not consistent:
            note = f"stabilizer {t.name} with s={s} does not match the tetravalent table (expects s={expected})"
    return StabilizerFinding(t, stab.order(), s, consistent, note)


def aut_report(graph: SimpleGraph) -> dict:
    res = automorphism_group(graph)
    g = res.group
    vt = g.is_transitive() if graph.n else True
    report = {
        "vertices": graph.n,
        "order": str(g.order()),
        "generators": [format_cycles(p) for p in res.generators],
        "vertex_transitive": vt,
        "max_s": None,
        "stabilizer_type": None,
    }
    if vt and graph.n and graph.is_regular():
        f = stabilizer_type_of(g, graph)
        report["max_s"] = f.max_s
        report["stabilizer_type"] = f.stabilizer.name
        report["stabilizer_order"] = f.stabilizer_order
        report["consistent_with_table"] = f.consistent
    return report


__all__ = [
    "OrderedPartition",
    "refine",
    "automorphism_group",
    "AutResult",
    "are_isomorphic",
    "count_s_arcs",
    "enumerate_s_arcs",
    "is_s_arc_transitive",
    "s_arc_orbit_size",
    "max_arc_transitivity",
    "stabilizer_type_of",
    "StabilizerFinding",
    "aut_report",
]

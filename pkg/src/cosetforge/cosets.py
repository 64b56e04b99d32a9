"""Right cosets, double cosets, coset graphs, Cayley graphs and quotients.

A right coset Hx is identified by its lexicographically least element,
found by walking down a stabilizer chain of H whose base is 0, 1, 2, ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import limits
from .chain import PermGroup, StabilizerChain, build_chain
from .graph import SimpleGraph, is_connected
from .limits import CapExceeded
from .perm import Permutation, inverse, is_identity, mul
from .subgroups import SubgroupHandle, conjugate_subgroup, intersect


def _lex_chain(h: SubgroupHandle) -> StabilizerChain:
    chain = h._lex_chain
    if chain is None:
        known = h.order() if (h._order is not None and h._elements is not None) else None
        chain = build_chain(h.generators, h.degree, base_prefix=range(h.degree), known_order=known)
        chain.levels = [lv for lv in chain.levels if len(lv.orbit) > 1]
        h._lex_chain = chain
    return chain


def canonical_rep(h: SubgroupHandle, x: Sequence[int]) -> tuple:
    """Lexicographically least element of the right coset ``Hx``."""
    chain = _lex_chain(h)
    n = h.degree
    c = tuple(x)
    for lv in chain.levels:
        # u maps the base point to pt, and (u c)[base] = c[pt]
        best = min(lv.orbit, key=c.__getitem__)
        if best != lv.base:
            c = mul(lv.u(best, n), c)
    return c


@dataclass
class CosetStructure:
    ambient: PermGroup
    subgroup: SubgroupHandle
    reps: list  # canonical representative of coset i; reps[0] is H itself
    action: list  # one permutation of range(index) per ambient generator
    label: dict = field(repr=False, default_factory=dict)

    @property
    def index(self) -> int:
        return len(self.reps)

    def label_of(self, x: Sequence[int]) -> int:
        return self.label[canonical_rep(self.subgroup, x)]

    def act(self, p: Sequence[int]) -> tuple:
        """Image of an arbitrary ambient element in the coset action."""
        return tuple(self.label_of(mul(r, p)) for r in self.reps)

    def image_group(self, name: str | None = None) -> PermGroup:
        core = core_order(self)
        g = PermGroup(self.action, degree=self.index, name=name, order=self.ambient.order() // core)
        return g


def coset_action(g: PermGroup, h: SubgroupHandle, index_cap: int = limits.INDEX_CAP) -> CosetStructure:
    """Action of ``g`` on the right cosets of ``h`` by right multiplication."""
    order = g.order()
    if order % h.order():
        raise ValueError("subgroup order does not divide group order")
    index = order // h.order()
    if index > index_cap:
        raise CapExceeded(f"index {index} exceeds index cap {index_cap}")
    gens = [tuple(x) for x in g.generators]
    start = canonical_rep(h, tuple(range(g.degree)))
    label = {start: 0}
    reps = [start]
    images: list[list[int]] = [[] for _ in gens]
    for r in reps:
        for j, s in enumerate(gens):
            c = canonical_rep(h, mul(r, s))
            k = label.get(c)
            if k is None:
                k = len(reps)
                label[c] = k
                reps.append(c)
            images[j].append(k)
    if len(reps) != index:
        raise ValueError(f"found {len(reps)} cosets, expected {index}: subgroup not contained in group?")
    action = [Permutation(img, check=False) for img in images]
    return CosetStructure(g, h, reps, action, label)


def core_order(cs: CosetStructure) -> int:
    """Order of the core of H (the kernel of the coset action)."""
    h = cs.subgroup
    els = h.elements()
    kernel = [e for e in els if all(cs.label_of(mul(r, e)) == i for i, r in enumerate(cs.reps))]
    return len(kernel)


@dataclass
class DoubleCoset:
    subgroup: SubgroupHandle
    g: tuple
    size: int
    right_coset_reps: list  # d with HgH the disjoint union of the Hd
    edge_stabilizer: SubgroupHandle  # H meet H^g

    @property
    def valency(self) -> int:
        return len(self.right_coset_reps)

    def is_symmetric(self) -> bool:
        """Whether HgH = Hg^-1H."""
        h = self.subgroup
        keys = {canonical_rep(h, d) for d in self.right_coset_reps}
        return canonical_rep(h, inverse(self.g)) in keys

    def contains(self, x: Sequence[int]) -> bool:
        keys = {canonical_rep(self.subgroup, d) for d in self.right_coset_reps}
        return canonical_rep(self.subgroup, x) in keys


def double_coset(h: SubgroupHandle, g: Sequence[int]) -> DoubleCoset:
    g = tuple(g)
    k = intersect(h, conjugate_subgroup(h, g))
    kset = k.element_set()
    # HgH is the union of H g t over right cosets K t of K = H meet H^g in H
    seen: set = set()
    reps = []
    for t in h.elements():
        if t in seen:
            continue
        seen.update(mul(x, t) for x in kset)
        reps.append(mul(g, t))
    size = h.order() * len(reps)
    return DoubleCoset(h, g, size, reps, k)


def build_coset_graph(cs: CosetStructure, d: DoubleCoset) -> SimpleGraph:
    """Coset graph on [G:H] with Hx adjacent to Hdx for d in the double coset."""
    if not d.is_symmetric():
        raise ValueError("double coset is not closed under inversion")
    h = cs.subgroup
    ds = d.right_coset_reps
    adj = []
    for r in cs.reps:
        adj.append([cs.label[canonical_rep(h, mul(x, r))] for x in ds])
    return SimpleGraph(cs.index, adj)


def cayley_graph(g: PermGroup, s: Sequence[Sequence[int]], cap: int = limits.INDEX_CAP) -> SimpleGraph:
    """Cayley graph with vertex set G (sorted) and edges {x, sx}."""
    if g.order() > cap:
        raise CapExceeded(f"group order {g.order()} exceeds cap {cap}")
    conn = [tuple(x) for x in s]
    sset = set(conn)
    for x in conn:
        if is_identity(x):
            raise ValueError("connection set contains the identity")
        if inverse(x) not in sset:
            raise ValueError("connection set is not closed under inversion")
        if not g.contains(x):
            raise ValueError("connection set element outside the group")
    elements = sorted(g.chain.iter_elements())
    index = {e: i for i, e in enumerate(elements)}
    adj = [[index[mul(x, e)] for x in sset] for e in elements]
    return SimpleGraph(len(elements), adj, labels=elements)


def quotient_graph(graph: SimpleGraph, partition: Sequence[Sequence[int]]) -> SimpleGraph:
    block = [-1] * graph.n
    for i, b in enumerate(partition):
        for v in b:
            if not 0 <= v < graph.n or block[v] != -1:
                raise ValueError("partition does not cover each vertex exactly once")
            block[v] = i
    if -1 in block:
        raise ValueError("partition does not cover every vertex")
    adj: list[set] = [set() for _ in partition]
    for u, v in graph.edges():
        bu, bv = block[u], block[v]
        if bu != bv:
            adj[bu].add(bv)
            adj[bv].add(bu)
    return SimpleGraph(len(partition), adj)


def orbits_on_vertices(g: PermGroup) -> list[list[int]]:
    return g.orbits()


def is_semiregular(g: PermGroup) -> bool:
    order = g.order()
    return all(len(o) == order for o in g.orbits())


def is_regular_on(g: PermGroup) -> bool:
    return g.is_transitive() and is_semiregular(g)


def generates(g: PermGroup, extra: Sequence[Sequence[int]], h: SubgroupHandle) -> bool:
    """Whether H together with ``extra`` generates all of ``g``."""
    gens = list(h.generators) + [tuple(x) for x in extra]
    return build_chain(gens, g.degree, order_bound=g.order()).order() == g.order()


__all__ = [
    "canonical_rep",
    "CosetStructure",
    "coset_action",
    "core_order",
    "DoubleCoset",
    "double_coset",
    "build_coset_graph",
    "is_connected",
    "cayley_graph",
    "quotient_graph",
    "orbits_on_vertices",
    "is_semiregular",
    "is_regular_on",
    "generates",
]

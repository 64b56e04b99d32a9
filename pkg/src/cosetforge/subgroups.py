"""Subgroups of permutation groups: handles, intersections, conjugacy, type
recognition and conjugacy-class censuses of subgroups of a given type.

There is no general normalizer or centralizer backtrack here. Conjugacy is
decided either by a bounded scan over the conjugacy orbit of a subgroup, or,
for A_n / S_n in their natural action, structurally: two subgroups are
S_n-conjugate exactly when some isomorphism between them matches the point
stabilizers orbit by orbit.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import limits
from .chain import PermGroup, build_chain
from .limits import CapExceeded
from .models import (
    OTHER,
    PROFILES,
    TYPE_ORDERS,
    IsoType,
    canonical_type_name,
    closure,
    conjugacy_classes,
    find_isomorphism,
    fingerprint,
    model_elements,
    model_fingerprint,
    model_generators,
    profile_generators,
    small_generating_set,
)
from .perm import Permutation, conjugate, cycle_lengths, format_cycles, mul, order_of, sign

logger = logging.getLogger(__name__)

_ORDER_TO_TYPES: dict[int, list[str]] = {}
for _name, _order in TYPE_ORDERS.items():
    _ORDER_TO_TYPES.setdefault(_order, []).append(_name)


class NoStrategyError(ValueError):
    """No census strategy applies to the requested (group, type) pair."""


class SubgroupHandle:
    """A subgroup given by generators, with optional cached element list."""

    def __init__(
        self,
        ambient: PermGroup | None,
        generators: Iterable[Sequence[int]],
        order: int | None = None,
        elements: Sequence[tuple] | None = None,
        degree: int | None = None,
        check: bool = False,
    ):
        gens = [g if isinstance(g, Permutation) else Permutation(g, check=False) for g in generators]
        if degree is None:
            if ambient is not None:
                degree = ambient.degree
            elif gens:
                degree = len(gens[0])
            else:
                raise ValueError("degree required for a subgroup without generators")
        self.ambient = ambient
        self.degree = degree
        self.generators = gens
        self._elements = [tuple(e) for e in elements] if elements is not None else None
        self._set: frozenset | None = None
        self._order = order if order is not None else (len(self._elements) if self._elements is not None else None)
        self._chain = None
        self._lex_chain = None
        if check and ambient is not None:
            for g in gens:
                if not ambient.contains(g):
                    raise ValueError(f"generator {format_cycles(g)} is not in the ambient group")

    @classmethod
    def from_strings(cls, ambient: PermGroup, strings: Iterable[str]) -> SubgroupHandle:
        from .perm import parse_cycles

        return cls(ambient, [parse_cycles(s, ambient.degree) for s in strings], check=True)

    @property
    def chain(self):
        if self._chain is None:
            # a caller-supplied order is certified: build_chain raises if it is not reached
            known = self._order
            self._chain = build_chain(self.generators, self.degree, known_order=known)
        return self._chain

    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def elements(self, cap: int = limits.ELEMENT_CAP) -> list[tuple]:
        if self._elements is None:
            if self.order() > cap:
                raise CapExceeded(f"subgroup order {self.order()} exceeds element cap {cap}")
            self._elements = list(self.chain.iter_elements())
        return self._elements

    def element_set(self, cap: int = limits.ELEMENT_CAP) -> frozenset:
        if self._set is None:
            self._set = frozenset(self.elements(cap))
        return self._set

    def key(self) -> frozenset:
        """Hashable identity of the subgroup: its element set."""
        return self.element_set()

    def contains(self, p: Sequence[int]) -> bool:
        p = tuple(p)
        if self._set is not None or self._elements is not None:
            return p in self.element_set()
        return self.chain.contains(p)

    __contains__ = contains

    def as_group(self, name: str | None = None) -> PermGroup:
        g = PermGroup(self.generators, degree=self.degree, name=name)
        g._chain = self.chain
        return g

    def generator_strings(self) -> list[str]:
        return [format_cycles(g) for g in self.generators]

    def __repr__(self) -> str:
        return f"<SubgroupHandle order={self._order} gens={self.generator_strings()}>"


def enumerate_elements(h: SubgroupHandle, cap: int = limits.ELEMENT_CAP) -> list[tuple]:
    return h.elements(cap)


def subgroup_from_elements(ambient: PermGroup | None, elements: Sequence[tuple], degree: int | None = None) -> SubgroupHandle:
    els = [tuple(e) for e in elements]
    if degree is None:
        degree = len(els[0]) if els else ambient.degree
    gens = small_generating_set(els)
    return SubgroupHandle(ambient, gens, elements=els, degree=degree)


def intersect(h1: SubgroupHandle, h2: SubgroupHandle, cap: int = limits.ELEMENT_CAP) -> SubgroupHandle:
    small, big = (h1, h2) if h1.order() <= h2.order() else (h2, h1)
    if small.order() > cap:
        raise CapExceeded(f"both subgroups exceed the element cap {cap}")
    els = [e for e in small.elements(cap) if big.contains(e)]
    return subgroup_from_elements(h1.ambient, els, degree=h1.degree)


def conjugate_subgroup(h: SubgroupHandle, p: Sequence[int]) -> SubgroupHandle:
    """``h^p = p^-1 h p``."""
    gens = [conjugate(g, p) for g in h.generators]
    els = [conjugate(e, p) for e in h._elements] if h._elements is not None else None
    return SubgroupHandle(h.ambient, gens, order=h._order, elements=els, degree=h.degree)


def is_normal_in(h: SubgroupHandle, g: PermGroup) -> bool:
    return all(h.contains(conjugate(a, x)) for x in g.generators for a in h.generators)


def _cycle_type_profile(elements: Iterable[tuple]) -> Counter:
    return Counter(tuple(sorted(cycle_lengths(e))) for e in elements)


# --- conjugacy -------------------------------------------------------------


def conjugacy_orbit(h: SubgroupHandle, g: PermGroup, cap: int | None = None) -> dict:
    """Map from element-set key to a conjugating element, over all conjugates of ``h`` in ``g``."""
    n = h.degree
    start = h.key()
    ident = tuple(range(n))
    seen = {start: ident}
    queue = [(start, ident)]
    gens = [tuple(x) for x in g.generators]
    for key, w in queue:
        for x in gens:
            k2 = frozenset(conjugate(e, x) for e in key)
            if k2 not in seen:
                w2 = mul(w, x)
                seen[k2] = w2
                queue.append((k2, w2))
                if cap is not None and len(seen) > cap:
                    raise CapExceeded(f"conjugacy orbit larger than {cap}")
    return seen


def are_conjugate(
    h1: SubgroupHandle,
    h2: SubgroupHandle,
    ambient: PermGroup | None = None,
    cap: int = limits.CONJUGACY_SCAN_CAP,
) -> Permutation | None:
    """Return g in the ambient group with ``h1^g = h2``, or None.

    Every returned witness has been re-checked.
    """
    g = ambient if ambient is not None else h1.ambient
    if g is None:
        raise ValueError("an ambient group is required")
    if h1.order() != h2.order():
        return None
    if g.natural is not None:
        witness = sym_conjugator(h1, h2, even=g.natural == "alternating")
    else:
        if g.order() > cap:
            raise CapExceeded(f"ambient order {g.order()} exceeds conjugacy scan cap {cap}")
        if _cycle_type_profile(h1.elements()) != _cycle_type_profile(h2.elements()):
            return None
        orbit = conjugacy_orbit(h1, g)
        witness = orbit.get(h2.key())
    if witness is None:
        return None
    witness = Permutation(witness, check=False)
    if conjugate_subgroup(h1, witness).key() != h2.key() or not g.contains(witness):
        raise AssertionError("conjugacy witness failed re-verification")
    return witness


def _point_stabilizer_keys(elements: Sequence[tuple], n: int) -> list[frozenset]:
    buckets: list[list] = [[] for _ in range(n)]
    for e in elements:
        for i in range(n):
            if e[i] == i:
                buckets[i].append(e)
    return [frozenset(b) for b in buckets]


def _orbits(gens: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    seen = [False] * n
    out = []
    for v in range(n):
        if seen[v]:
            continue
        orb = [v]
        seen[v] = True
        for pt in orb:
            for g in gens:
                w = g[pt]
                if not seen[w]:
                    seen[w] = True
                    orb.append(w)
        out.append(sorted(orb))
    return out


def sym_conjugators(h1: SubgroupHandle, h2: SubgroupHandle) -> Iterator[tuple]:
    """Yield permutations s of the points with ``h1^s = h2``.

    Every such s induces an isomorphism phi(x) = s^-1 x s that carries the
    stabilizer of each point p to the stabilizer of s(p); conversely an
    isomorphism plus an orbit-by-orbit choice of matching points defines s.
    Fixed points are matched in increasing order, so only one permutation
    per arrangement of the fixed points is produced.
    """
    n = h1.degree
    if h1.order() != h2.order():
        return
    e1, e2 = h1.elements(), h2.elements()
    if _cycle_type_profile(e1) != _cycle_type_profile(e2):
        return
    orbs1 = [o for o in _orbits(h1.generators, n) if len(o) > 1]
    orbs2 = [o for o in _orbits(h2.generators, n) if len(o) > 1]
    if sorted(map(len, orbs1)) != sorted(map(len, orbs2)):
        return
    fixed1 = sorted(set(range(n)) - {p for o in orbs1 for p in o})
    fixed2 = sorted(set(range(n)) - {p for o in orbs2 for p in o})
    stab2 = _point_stabilizer_keys(e2, n)
    orbit_of2 = {}
    for j, o in enumerate(orbs2):
        for p in o:
            orbit_of2[p] = j
    bases1 = [o[0] for o in orbs1]
    stab1 = [[e for e in e1 if e[p] == p] for p in bases1]
    iso_source = [tuple(g) for g in h1.generators] or [tuple(range(n))]
    for phi in find_isomorphism(iso_source, h1.order(), e2, same_cycle_type=True, all_maps=True):
        targets = [frozenset(phi[e] for e in s) for s in stab1]
        cand = []
        for i, o in enumerate(orbs1):
            cand.append([q for q in range(n) if q in orbit_of2 and len(orbs2[orbit_of2[q]]) == len(o) and stab2[q] == targets[i]])
        if any(not c for c in cand):
            continue
        yield from _assign(0, orbs1, bases1, cand, orbit_of2, set(), {}, phi, e1, fixed1, fixed2, n)


def _assign(i, orbs1, bases1, cand, orbit_of2, used, partial, phi, e1, fixed1, fixed2, n):
    if i == len(orbs1):
        s = [0] * n
        for p, q in partial.items():
            s[p] = q
        for p, q in zip(fixed1, fixed2):
            s[p] = q
        yield tuple(s)
        return
    p = bases1[i]
    for q in cand[i]:
        j = orbit_of2[q]
        if j in used:
            continue
        extra = {}
        for e in e1:
            extra[e[p]] = phi[e][q]
        used.add(j)
        partial.update(extra)
        yield from _assign(i + 1, orbs1, bases1, cand, orbit_of2, used, partial, phi, e1, fixed1, fixed2, n)
        for k in extra:
            del partial[k]
        used.discard(j)


def sym_conjugator(h1: SubgroupHandle, h2: SubgroupHandle, even: bool = False) -> tuple | None:
    """A conjugating permutation in S_n (or A_n when ``even``), or None."""
    n = h1.degree
    fixed2 = [p for p in range(n) if all(g[p] == p for g in h2.generators)]
    for s in sym_conjugators(h1, h2):
        if not even or sign(s) == 1:
            return s
        if len(fixed2) >= 2:
            # a transposition of two fixed points of h2 centralizes h2
            t = list(range(n))
            t[fixed2[0]], t[fixed2[1]] = fixed2[1], fixed2[0]
            return mul(s, tuple(t))
    return None


def normalizer_has_odd(h: SubgroupHandle) -> bool:
    """Whether the normalizer of ``h`` in S_n contains an odd permutation."""
    n = h.degree
    fixed = [p for p in range(n) if all(g[p] == p for g in h.generators)]
    if len(fixed) >= 2:
        return True
    return any(sign(s) == -1 for s in sym_conjugators(h, h))


# --- isomorphism types -----------------------------------------------------


def iso_type(h: SubgroupHandle, cap: int = limits.ELEMENT_CAP) -> IsoType:
    """Recognize which of the built-in stabilizer types ``h`` is, if any."""
    order = h.order()
    names = _ORDER_TO_TYPES.get(order)
    if not names:
        return IsoType(OTHER, order)
    els = h.elements(cap)
    gens = h.generators or [tuple(range(h.degree))]
    fp = fingerprint(els, gens)
    for name in names:
        if fp != model_fingerprint(name):
            continue
        if order <= limits.ISO_FALLBACK_CAP:
            if find_isomorphism(profile_generators(name), order, els) is None:
                continue
        return IsoType(name, order, fp)
    return IsoType(OTHER, order, fp)


# --- census ----------------------------------------------------------------


@dataclass
class SubgroupCensus:
    ambient: str
    target: IsoType
    classes: list[SubgroupHandle] = field(default_factory=list)
    strategy: str = ""

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "target": self.target.name,
            "target_order": self.target.order,
            "strategy": self.strategy,
            "class_count": self.class_count,
            "classes": [
                {"index": i, "order": c.order(), "generators": c.generator_strings()}
                for i, c in enumerate(self.classes)
            ],
        }


def elements_by_order(g: PermGroup, orders: Iterable[int]) -> dict[int, list[tuple]]:
    wanted = set(orders)
    out: dict[int, list[tuple]] = {k: [] for k in wanted}
    for e in g.chain.iter_elements():
        k = order_of(e)
        if k in wanted:
            out[k].append(e)
    for k in out:
        out[k].sort()
    return out


def class_representatives(elements: Sequence[tuple], gens: Sequence[Sequence[int]]) -> list[tuple]:
    """Least element of each conjugacy class, sorted; ``elements`` must be a union of classes."""
    return sorted(min(c) for c in conjugacy_classes(elements, gens))


def _scan_chunk(args) -> list[tuple]:
    """Scan one shard of candidate generating tuples; return ``(position, gens)`` per new class."""
    gen_degree, ambient_gens, target, tasks = args
    order = TYPE_ORDERS[target]
    ambient = PermGroup(ambient_gens, degree=gen_degree)
    seen: set = set()
    rejected: set = set()
    found = []
    for pos, gens in tasks:
        els = closure(gens, gen_degree, cap=order)
        if els is None or len(els) != order:
            continue
        key = frozenset(els)
        if key in seen or key in rejected:
            continue
        h = SubgroupHandle(ambient, gens, elements=els)
        if iso_type(h).name != target:
            rejected.add(key)
            continue
        found.append((pos, [tuple(x) for x in gens]))
        seen.update(conjugacy_orbit(h, ambient))
    return found


def _pair_tasks(a_reps, bs, oab) -> list:
    tasks = []
    for i, a in enumerate(a_reps):
        for j, b in enumerate(bs):
            if order_of(mul(a, b)) == oab:
                tasks.append(((i, j), (a, b)))
    return tasks


def _run_tasks(g: PermGroup, target: str, tasks: list, shards: int) -> list[tuple]:
    gens = [tuple(x) for x in g.generators]
    if shards <= 1 or len(tasks) < 2:
        found = _scan_chunk((g.degree, gens, target, tasks))
    else:
        size = -(-len(tasks) // shards)
        chunks = [tasks[k:k + size] for k in range(0, len(tasks), size)]
        with ProcessPoolExecutor(max_workers=shards) as pool:
            parts = pool.map(_scan_chunk, [(g.degree, gens, target, c) for c in chunks])
            found = [x for part in parts for x in part]
    found.sort(key=lambda x: x[0])
    return found


def _merge_classes(g: PermGroup, found: list[tuple]) -> list[SubgroupHandle]:
    seen: set = set()
    reps = []
    for _, gens in found:
        h = SubgroupHandle(g, gens)
        h.elements()
        if h.key() in seen:
            continue
        reps.append(h)
        seen.update(conjugacy_orbit(h, g))
    return reps


def census(
    g: PermGroup,
    t: str | IsoType,
    shards: int = 1,
    pair_scan_cap: int = limits.PAIR_SCAN_CAP,
) -> SubgroupCensus:
    """Conjugacy-class representatives of all subgroups of ``g`` of type ``t``."""
    name = canonical_type_name(t.name if isinstance(t, IsoType) else t)
    target = IsoType(name, TYPE_ORDERS[name])
    label = g.name or "group"
    if name not in PROFILES:
        raise NoStrategyError(f"no generator profile stored for {name}")
    if g.order() % target.order:
        return SubgroupCensus(label, target, [], "order")
    if g.order() <= pair_scan_cap:
        reps = _census_scan(g, name, shards)
        return SubgroupCensus(label, target, reps, "scan")
    if g.natural is not None:
        reps = census_natural(g, name)
        return SubgroupCensus(label, target, reps, "actions")
    raise NoStrategyError(f"|G| = {g.order()} exceeds the pair scan cap and G is not natural A_n/S_n")


def _census_scan(g: PermGroup, name: str, shards: int) -> list[SubgroupHandle]:
    prof = PROFILES[name]
    if prof[0] == "pair":
        _, oa, ob, oab = prof
        by = elements_by_order(g, {oa, ob})
        a_reps = class_representatives(by[oa], g.generators)
        logger.info("census %s: %d reps of order %d, %d elements of order %d", name, len(a_reps), oa, len(by[ob]), ob)
        tasks = _pair_tasks(a_reps, by[ob], oab)
    else:
        _, base, oc = prof
        base_reps = _census_scan(g, base, shards)
        cs = elements_by_order(g, {oc})[oc]
        tasks = []
        for i, m in enumerate(base_reps):
            mset = m.element_set()
            for j, c in enumerate(cs):
                if c in mset:
                    continue
                if all(conjugate(x, c) in mset for x in m.generators):
                    tasks.append(((i, j), tuple(tuple(x) for x in m.generators) + (c,)))
    found = _run_tasks(g, name, tasks, shards)
    reps = _merge_classes(g, found)
    for h in reps:
        h.generators = sorted(h.generators)
    return reps


# --- census in natural A_n / S_n via faithful actions ------------------------


def all_subgroups(elements: Sequence[tuple]) -> list[frozenset]:
    """Every subgroup of a small group, as element sets (joins of cyclic subgroups)."""
    degree = len(elements[0])
    cyclic = {frozenset(closure([e], degree)) for e in elements}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for a in frontier:
            for c in cyclic:
                if c <= a:
                    continue
                gens = small_generating_set(list(a)) + [min(c - a)]
                j = frozenset(closure(gens, degree))
                if j not in subs:
                    new.add(j)
        subs |= new
        frontier = new
    return sorted(subs, key=lambda s: (len(s), sorted(s)))


@lru_cache(maxsize=None)
def transitive_actions(name: str) -> list[tuple]:
    """Transitive actions of the model group, one per subgroup class.

    Each entry is ``(degree, core_key, images)`` where ``images`` lists the
    permutation of the right cosets of a point stabilizer induced by each
    model generator.
    """
    gens = [tuple(x) for x in model_generators(name)]
    elems = list(model_elements(name))
    subs = all_subgroups(elems)
    seen: set = set()
    actions = []
    for k in subs:
        if k in seen:
            continue
        orbit = {k}
        queue = [k]
        for s in queue:
            for x in gens:
                s2 = frozenset(conjugate(e, x) for e in s)
                if s2 not in orbit:
                    orbit.add(s2)
                    queue.append(s2)
        seen |= orbit
        core = frozenset.intersection(*orbit)
        # right cosets K x, labelled by discovery order
        ident = tuple(range(len(gens[0])))
        label = {k: 0}
        reps = [ident]
        cos = [k]
        for c in cos:
            rep = reps[label[c]]
            for x in gens:
                c2 = frozenset(mul(e, x) for e in c)
                if c2 not in label:
                    label[c2] = len(cos)
                    cos.append(c2)
                    reps.append(mul(rep, x))
        images = []
        for x in gens:
            img = [label[frozenset(mul(e, x) for e in c)] for c in cos]
            images.append(tuple(img))
        actions.append((len(cos), core, images))
    actions.sort(key=lambda a: (a[0], a[2]))
    return actions


def census_natural(g: PermGroup, name: str) -> list[SubgroupHandle]:
    """Subgroup classes of type ``name`` in natural A_n or S_n.

    Faithful actions of the model on n points are enumerated as multisets
    of transitive actions; embeddings are deduplicated up to S_n-conjugacy
    and, for A_n, an S_n-class splits in two when its normalizer is even.
    """
    n = g.degree
    alternating = g.natural == "alternating"
    actions = transitive_actions(name)
    model_order = TYPE_ORDERS[name]
    ident_model = tuple(range(len(model_generators(name)[0])))
    ngens = len(model_generators(name))
    realized: list[SubgroupHandle] = []
    for combo in _degree_multisets(actions, n):
        core = frozenset.intersection(*(actions[i][1] for i in combo))
        if core != frozenset([ident_model]):
            continue
        images = []
        for gi in range(ngens):
            img = []
            off = 0
            for i in combo:
                deg, _, imgs = actions[i]
                img.extend(off + x for x in imgs[gi])
                off += deg
            images.append(tuple(img))
        if alternating and any(sign(p) == -1 for p in images):
            continue
        h = SubgroupHandle(g, images)
        if h.order() != model_order:
            continue
        realized.append(h)
    classes: list[SubgroupHandle] = []
    for h in realized:
        if any(h.order() == c.order() and sym_conjugator(h, c) is not None for c in classes):
            continue
        classes.append(h)
    if not alternating:
        return classes
    out = []
    for h in classes:
        out.append(h)
        if not normalizer_has_odd(h):
            t = list(range(n))
            t[0], t[1] = 1, 0
            out.append(conjugate_subgroup(h, tuple(t)))
    return out


def _degree_multisets(actions: list[tuple], n: int) -> Iterator[tuple]:
    """Multisets of action indices whose degrees sum to n (degree-1 action pads)."""
    idx = list(range(len(actions)))

    def rec(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            yield tuple(acc)
            return
        for i in idx[start:]:
            d = actions[i][0]
            if d <= remaining:
                acc.append(i)
                yield from rec(i, remaining - d, acc)
                acc.pop()

    yield from rec(0, n, [])


__all__ = [
    "SubgroupHandle",
    "SubgroupCensus",
    "NoStrategyError",
    "enumerate_elements",
    "intersect",
    "conjugate_subgroup",
    "is_normal_in",
    "are_conjugate",
    "conjugacy_orbit",
    "sym_conjugator",
    "normalizer_has_odd",
    "iso_type",
    "census",
    "census_natural",
    "all_subgroups",
    "transitive_actions",
    "subgroup_from_elements",
    "class_representatives",
    "elements_by_order",
]

"""Built-in model groups for the tetravalent 2-arc-transitive stabilizer types.

Each type carries a permutation model, a fingerprint (element orders, class
sizes, centre and derived-subgroup orders) and a generation profile used by
the subgroup census.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .perm import Permutation, conjugate, inverse, is_identity, mul, order_of

A4 = "A4"
S4 = "S4"
Z3xA4 = "Z3xA4"
Z3sS4 = "Z3:S4"
S3xS4 = "S3xS4"
AGL23 = "AGL(2,3)"
Z3_5sGL23 = "Z3^5:GL(2,3)"
OTHER = "other"

TYPE_ORDERS = {
    A4: 12,
    S4: 24,
    Z3xA4: 36,
    Z3sS4: 72,
    S3xS4: 144,
    AGL23: 432,
    Z3_5sGL23: 11664,
}

# Largest s for which a tetravalent (G,s)-arc-transitive graph can have this
# vertex stabilizer.
TYPE_ARC_LEVEL = {A4: 2, S4: 2, Z3xA4: 3, Z3sS4: 3, S3xS4: 3, AGL23: 4, Z3_5sGL23: 7}

_ALIASES = {
    "a4": A4, "alt4": A4,
    "s4": S4, "sym4": S4,
    "z3xa4": Z3xA4, "z3*a4": Z3xA4, "c3xa4": Z3xA4,
    "z3:s4": Z3sS4, "z3s4": Z3sS4, "z3|s4": Z3sS4,
    "s3xs4": S3xS4,
    "agl(2,3)": AGL23, "agl23": AGL23,
    "z3^5:gl(2,3)": Z3_5sGL23, "sevenarc": Z3_5sGL23,
}

# How the census finds every subgroup of a type, frozen from the models
# below and re-checked by the test-suite:
#   ("pair", oa, ob, oab): generated by some a, b with these orders and ord(ab);
#   ("extend", base, oc): <M, c> with M a normal subgroup of type ``base``
#   and c of order oc normalizing M.
PROFILES = {
    A4: ("pair", 2, 3, 3),
    S4: ("pair", 2, 3, 4),
    Z3xA4: ("pair", 3, 3, 3),
    Z3sS4: ("extend", Z3xA4, 2),  # not 2-generated: Z3:S4 / V4 is Dih(Z3^2)
    S3xS4: ("pair", 2, 12, 6),
    AGL23: ("pair", 2, 8, 3),
    Z3_5sGL23: ("pair", 2, 8, 9),  # (2,8,3) pairs only reach GL(2,3) complements
}


def canonical_type_name(name: str) -> str:
    key = name.strip().replace(" ", "").replace("⋊", ":").replace("×", "x")
    low = key.lower()
    if low in _ALIASES and _ALIASES[low] in TYPE_ORDERS:
        return _ALIASES[low]
    for t in TYPE_ORDERS:
        if t.lower() == low:
            return t
    raise KeyError(f"unknown isomorphism type {name!r}")


@dataclass(frozen=True)
class IsoType:
    name: str
    order: int
    fingerprint: tuple = field(default=(), compare=False, repr=False)

    def __str__(self) -> str:
        return self.name


def _cyc(degree: int, *cycles: Sequence[int]) -> Permutation:
    return Permutation.from_cycles(cycles, degree)


def _agl23_generators() -> list[Permutation]:
    pts = [(x, y) for x in range(3) for y in range(3)]
    idx = {p: i for i, p in enumerate(pts)}

    def affine(m, t):
        img = []
        for x, y in pts:
            u = (m[0][0] * x + m[0][1] * y + t[0]) % 3
            v = (m[1][0] * x + m[1][1] * y + t[1]) % 3
            img.append(idx[(u, v)])
        return Permutation(img)

    ident = ((1, 0), (0, 1))
    return [
        affine(ident, (1, 0)),
        affine(((1, 1), (0, 1)), (0, 0)),
        affine(((0, 1), (1, 0)), (0, 0)),
    ]


def model_generators(name: str) -> list[Permutation]:
    """Generators of the built-in permutation model of ``name``."""
    if name == A4:
        return [_cyc(4, (0, 1, 2)), _cyc(4, (0, 1), (2, 3))]
    if name == S4:
        return [_cyc(4, (0, 1, 2, 3)), _cyc(4, (0, 1))]
    if name == Z3xA4:
        return [_cyc(7, (0, 1, 2)), _cyc(7, (3, 4, 5)), _cyc(7, (3, 4), (5, 6))]
    if name == Z3sS4:
        # sign-matched pairs in S3 x S4: the odd part of S4 inverts the Z3
        return [_cyc(7, (0, 1, 2)), _cyc(7, (3, 4, 5)), _cyc(7, (3, 4), (5, 6)), _cyc(7, (0, 1), (3, 4))]
    if name == S3xS4:
        return [_cyc(7, (0, 1, 2)), _cyc(7, (0, 1)), _cyc(7, (3, 4, 5, 6)), _cyc(7, (3, 4))]
    if name == AGL23:
        return _agl23_generators()
    if name == Z3_5sGL23:
        from .fp import sevenarc_stabilizer_group

        return list(sevenarc_stabilizer_group().generators)
    raise KeyError(f"no model for {name!r}")


def closure(gens: Sequence[Sequence[int]], degree: int, cap: int | None = None) -> list[tuple] | None:
    """All elements of ``<gens>`` by breadth-first multiplication.

    Returns None as soon as more than ``cap`` elements appear.
    """
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens if not is_identity(g)]
    seen = {ident}
    out = [ident]
    for x in out:
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                out.append(y)
                if cap is not None and len(out) > cap:
                    return None
    return out


def conjugacy_classes(elements: Sequence[tuple], gens: Sequence[Sequence[int]]) -> list[list[tuple]]:
    gens = [tuple(g) for g in gens]
    seen = set()
    classes = []
    for e in elements:
        if e in seen:
            continue
        cls = [e]
        seen.add(e)
        for x in cls:
            for g in gens:
                y = conjugate(x, g)
                if y not in seen:
                    seen.add(y)
                    cls.append(y)
        classes.append(cls)
    return classes


def normal_closure(seeds: Sequence[Sequence[int]], gens: Sequence[Sequence[int]], degree: int) -> list[tuple]:
    """Elements of the smallest subgroup containing ``seeds`` normalized by ``<gens>``."""
    cur_gens = [tuple(s) for s in seeds]
    elems = closure(cur_gens, degree)
    eset = set(elems)
    changed = True
    while changed:
        changed = False
        for s in list(cur_gens):
            for g in gens:
                c = conjugate(s, g)
                if c not in eset:
                    cur_gens.append(c)
                    elems = closure(cur_gens, degree)
                    eset = set(elems)
                    changed = True
    return elems


def fingerprint(elements: Sequence[tuple], gens: Sequence[Sequence[int]]) -> tuple:
    degree = len(elements[0])
    gens = [tuple(g) for g in gens]
    orders = tuple(sorted(Counter(order_of(e) for e in elements).items()))
    class_sizes = tuple(sorted(len(c) for c in conjugacy_classes(elements, gens)))
    centre = sum(1 for e in elements if all(mul(e, g) == mul(g, e) for g in gens))
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            c = mul(mul(inverse(a), inverse(b)), mul(a, b))
            if not is_identity(c):
                comms.append(c)
    derived = len(normal_closure(comms, gens, degree)) if comms else 1
    return (len(elements), orders, class_sizes, centre, derived)


@lru_cache(maxsize=None)
def model_elements(name: str) -> tuple:
    gens = model_generators(name)
    return tuple(closure(gens, len(gens[0])))


@lru_cache(maxsize=None)
def model_fingerprint(name: str) -> tuple:
    gens = model_generators(name)
    return fingerprint(list(model_elements(name)), gens)


@lru_cache(maxsize=None)
def profile_generators(name: str) -> tuple:
    """Generators of the model realizing ``PROFILES[name]``.

    For a pair profile this is (a, b); for an extend profile it is the
    generators of the normal base subgroup followed by the extra element.
    """
    prof = PROFILES[name]
    elems = model_elements(name)
    order = TYPE_ORDERS[name]
    degree = len(elems[0])
    if prof[0] == "pair":
        _, oa, ob, oab = prof
        As = [e for e in elems if order_of(e) == oa]
        Bs = [e for e in elems if order_of(e) == ob]
        for a in As:
            for b in Bs:
                if order_of(mul(a, b)) != oab:
                    continue
                got = closure([a, b], degree, cap=order)
                if got is not None and len(got) == order:
                    return Permutation(a, check=False), Permutation(b, check=False)
        raise ValueError(f"profile {prof} does not generate {name}")
    _, base, oc = prof
    gens = model_generators(name)
    comms = [mul(mul(inverse(a), inverse(b)), mul(a, b)) for a in gens for b in gens]
    derived = normal_closure([c for c in comms if not is_identity(c)], gens, degree)
    if len(derived) != TYPE_ORDERS[base]:
        raise ValueError(f"derived subgroup of {name} is not of type {base}")
    dset = set(derived)
    dgens = small_generating_set(derived)
    for c in elems:
        if c in dset or order_of(c) != oc:
            continue
        got = closure(dgens + [c], degree, cap=order)
        if got is not None and len(got) == order:
            return tuple(Permutation(g, check=False) for g in dgens + [c])
    raise ValueError(f"profile {prof} does not generate {name}")


def small_generating_set(elements: Sequence[tuple]) -> list[tuple]:
    """Greedy generating set: repeatedly add a largest-order element not yet covered."""
    if not elements:
        return []
    degree = len(elements[0])
    ranked = sorted(elements, key=lambda e: (-order_of(e), e))
    gens: list[tuple] = []
    covered = {tuple(range(degree))}
    target = len(elements)
    for e in ranked:
        if len(covered) == target:
            break
        if e in covered:
            continue
        gens.append(e)
        covered = set(closure(gens, degree))
    return gens


def find_isomorphism(
    src_gens: Sequence[Sequence[int]],
    src_order: int,
    target_elements: Sequence[tuple],
    same_cycle_type: bool = False,
    all_maps: bool = False,
):
    """Search for isomorphisms from ``<src_gens>`` onto the target group.

    Generator images are tried in the target; a candidate assignment is
    accepted when the induced map on the Cayley graph of the source is
    well defined and bijective. Returns the first isomorphism as a dict
    (source element -> target element), or a generator over all of them
    when ``all_maps`` is set.
    """
    it = _iter_isomorphisms(src_gens, src_order, target_elements, same_cycle_type)
    if all_maps:
        return it
    return next(it, None)


def _iter_isomorphisms(src_gens, src_order, target_elements, same_cycle_type):
    from .perm import cycle_lengths

    src_gens = [tuple(g) for g in src_gens]
    if len(target_elements) != src_order:
        return
    degree_s = len(src_gens[0])
    ident_s = tuple(range(degree_s))
    ident_t = tuple(range(len(target_elements[0])))
    tset = set(target_elements)

    def signature(p):
        if same_cycle_type:
            return tuple(sorted(cycle_lengths(p)))
        return order_of(p)

    by_sig: dict = {}
    for e in target_elements:
        by_sig.setdefault(signature(e), []).append(e)
    candidates = [by_sig.get(signature(g), []) for g in src_gens]
    k = len(src_gens)

    def extend(images):
        phi = {ident_s: ident_t}
        queue = [ident_s]
        for x in queue:
            fx = phi[x]
            for g, fg in zip(src_gens, images):
                y = mul(x, g)
                fy = mul(fx, fg)
                got = phi.get(y)
                if got is None:
                    phi[y] = fy
                    queue.append(y)
                elif got != fy:
                    return None
        if len(phi) != src_order or len(set(phi.values())) != src_order:
            return None
        if not all(v in tset for v in phi.values()):
            return None
        return phi

    prod_orders = [[order_of(mul(src_gens[j], src_gens[i])) for j in range(i)] for i in range(k)]

    def rec(i, images):
        if i == k:
            phi = extend(images)
            if phi is not None:
                yield phi
            return
        for c in candidates[i]:
            if all(order_of(mul(images[j], c)) == prod_orders[i][j] for j in range(i)):
                yield from rec(i + 1, images + [c])

    yield from rec(0, [])

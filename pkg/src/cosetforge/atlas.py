"""Embedded group atlas: named permutation groups with order checks, the
24-point example fixture and the index table of simple-group pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable

from .chain import PermGroup
from .perm import Permutation, parse_cycles


@dataclass(frozen=True)
class AtlasEntry:
    name: str
    degree: int
    generators: tuple  # 1-based cycle strings
    order: int
    provenance: str
    tier: str = "core"


_M11 = ("(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)")
_M12 = _M11 + ("(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)",)
_M24 = (
    "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
    "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
    "(1,24)(2,23)(3,12)(4,16)(5,18)(6,10)(7,20)(8,14)(9,21)(11,17)(13,22)(15,19)",
)

# Generators of the example on 24 points, 1-based, as published.
EXAMPLE_CYCLES = {
    "x": "(1, 2)(3, 7)(4, 10)(5, 13)(6, 15)(8, 12)(9, 19)(11, 18)(14, 22)(16, 20)(17, 24)(21, 23)",
    "y": "(1, 3)(2, 7)(4, 8)(5, 9)(6, 18)(10, 12)(11, 15)(13, 19)(14, 20)(16, 22)(17, 23)(21, 24)",
    "z": "(1, 4, 6)(2, 8, 11)(3, 12, 15)(5, 17, 16)(7, 10, 18)(9, 21, 20)(13, 23, 14)(19, 24, 22)",
    "w": "(1, 5)(2, 9)(3, 13)(4, 16)(6, 17)(7, 19)(8, 20)(10, 22)(11, 21)(12, 14)(15, 23)(18, 24)",
    "g1": "(1, 5)(2, 10)(3, 14)(4, 17)(6, 16)(7, 11)(8, 18)(9, 22)(12, 13)(15, 23)(19, 21)(20, 24)",
    "g2": "(1, 5)(2, 10)(3, 8)(4, 16)(6, 15)(7, 19)(9, 22)(11, 12)(13, 20)(14, 18)(17, 24)(21, 23)",
    "g3": "(1, 5)(2, 9)(3, 13)(4, 16)(6, 15)(7, 14)(8, 20)(10, 19)(11, 17)(12, 23)(18, 22)(21, 24)",
    "g4": "(1, 2)(3, 12)(4, 8)(5, 9)(6, 10)(7, 19)(11, 23)(13, 22)(14, 18)(15, 20)(16, 21)(17, 24)",
}


# --- order formulas ----------------------------------------------------------


def order_alternating(n: int) -> int:
    return math.factorial(n) // 2 if n >= 2 else 1


def order_psl(n: int, q: int) -> int:
    o = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        o *= q**i - 1
    return o // math.gcd(n, q - 1)


def order_psu(n: int, q: int) -> int:
    o = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        o *= q**i - (-1) ** i
    return o // math.gcd(n, q + 1)


def order_psp(n2: int, q: int) -> int:
    m = n2 // 2
    o = q ** (m * m)
    for i in range(1, m + 1):
        o *= q ** (2 * i) - 1
    return o // math.gcd(2, q - 1)


def order_g2(q: int) -> int:
    return q**6 * (q**6 - 1) * (q**2 - 1)


MATHIEU_ORDERS = {"M11": 7920, "M12": 95040, "M22": 443520, "M23": 10200960, "M24": 244823040}


# --- matrix-group constructions ------------------------------------------------


def _projective_points(dim: int, q: int) -> list[tuple]:
    pts = []
    for v in product(range(q), repeat=dim):
        if any(v):
            lead = next(x for x in v if x)
            if lead == 1:
                pts.append(v)
    return pts


def _normalize(v: tuple, q: int) -> tuple:
    lead = next(x for x in v if x)
    inv = pow(lead, -1, q)
    return tuple(x * inv % q for x in v)


def _matrix_action(mats: list, pts: list, q: int) -> list[Permutation]:
    idx = {p: i for i, p in enumerate(pts)}
    gens = []
    for m in mats:
        img = []
        for p in pts:
            # row vector times matrix
            v = tuple(sum(p[i] * m[i][j] for i in range(len(p))) % q for j in range(len(p)))
            img.append(idx[_normalize(v, q)])
        gens.append(Permutation(img))
    return gens


def _sl_generators(dim: int, q: int) -> list:
    mats = []
    for i in range(dim):
        for j in range(dim):
            if i != j:
                m = [[int(a == b) for b in range(dim)] for a in range(dim)]
                m[i][j] = 1
                mats.append(m)
    return mats


def _psl3(q: int) -> list[Permutation]:
    return _matrix_action(_sl_generators(3, q), _projective_points(3, q), q)


def _psl2_11() -> list[Permutation]:
    # projective line over GF(11): points 0..10 and infinity (index 11)
    inf = 11

    def mobius(a, b, c, d):
        img = []
        for x in range(12):
            if x == inf:
                img.append(inf if c == 0 else a * pow(c, -1, 11) % 11)
                continue
            num, den = (a * x + b) % 11, (c * x + d) % 11
            img.append(inf if den == 0 else num * pow(den, -1, 11) % 11)
        return Permutation(img)

    return [mobius(1, 1, 0, 1), mobius(0, 10, 1, 0), mobius(4, 0, 0, 3)]


def _psp6_2() -> list[Permutation]:
    # symplectic transvections on the 63 nonzero vectors of GF(2)^6
    vecs = [v for v in product(range(2), repeat=6) if any(v)]
    idx = {v: i for i, v in enumerate(vecs)}

    def form(u, v):
        return (u[0] * v[3] + u[3] * v[0] + u[1] * v[4] + u[4] * v[1] + u[2] * v[5] + u[5] * v[2]) % 2

    gens = []
    for a in vecs:
        if sum(a) > 2:
            continue
        img = []
        for x in vecs:
            y = tuple((xi + form(x, a) * ai) % 2 for xi, ai in zip(x, a)) if form(x, a) else x
            img.append(idx[y])
        gens.append(Permutation(img))
    return gens


def _alt_gens(n: int) -> list[str]:
    if n < 3:
        return []
    if n == 3:
        return ["(1,2,3)"]
    if n % 2:
        return ["(" + ",".join(map(str, range(1, n + 1))) + ")", "(1,2,3)"]
    return ["(" + ",".join(map(str, range(2, n + 1))) + ")", "(1,2,3)"]


def _sym_gens(n: int) -> list[str]:
    if n < 2:
        return []
    if n == 2:
        return ["(1,2)"]
    return ["(" + ",".join(map(str, range(1, n + 1))) + ")", "(1,2)"]


_BUILDERS: dict[str, tuple[Callable[[], list[Permutation]], int, str, str]] = {
    "PSL(2,7)": (lambda: _psl3(2), order_psl(3, 2), "PSL(3,2) on the 7 points of the Fano plane", "core"),
    "PSL(3,3)": (lambda: _psl3(3), order_psl(3, 3), "elementary matrices acting on 13 projective points", "core"),
    "PSL(2,11)": (_psl2_11, order_psl(2, 11), "Moebius maps on the 12-point projective line", "core"),
    "PSp(6,2)": (_psp6_2, order_psp(6, 2), "symplectic transvections on 63 nonzero vectors", "stretch"),
}

_EMBEDDED = {
    "M11": AtlasEntry("M11", 11, _M11, 7920, "standard degree-11 generators"),
    "M12": AtlasEntry("M12", 12, _M12, 95040, "M11 generators plus an involution moving point 12"),
    "M24": AtlasEntry("M24", 24, _M24, 244823040, "standard degree-24 generators", "stretch"),
}

_ALIASES = {"PSL(3,2)": "PSL(2,7)", "A9-NATURAL": "A9"}


def atlas_names() -> list[str]:
    return sorted(_EMBEDDED) + sorted(_BUILDERS) + ["A<n>", "S<n>", "example-a24"]


def _normal_name(name: str) -> str:
    key = name.strip().replace(" ", "")
    key = _ALIASES.get(key.upper(), key)
    return key


@lru_cache(maxsize=None)
def load_atlas(name: str) -> PermGroup:
    """Load a named group and check its order."""
    key = _normal_name(name)
    if key in _EMBEDDED:
        e = _EMBEDDED[key]
        g = PermGroup.from_cycle_strings(e.generators, e.degree, name=e.name)
        expected = e.order
    elif key in _BUILDERS:
        build, expected, _, _ = _BUILDERS[key]
        g = PermGroup(build(), name=key)
    elif key.upper() in ("EXAMPLE-A24", "A24-EXAMPLE"):
        return load_atlas("A24")
    elif key[:1] in ("A", "S") and key[1:].isdigit():
        n = int(key[1:])
        if not 1 <= n <= 64:
            raise KeyError(f"unsupported degree in {name!r}")
        alt = key[0] == "A"
        gens = _alt_gens(n) if alt else _sym_gens(n)
        g = PermGroup([parse_cycles(s, n) for s in gens], degree=n, name=f"{key[0]}{n}")
        g.natural = "alternating" if alt else "symmetric"
        expected = order_alternating(n) if alt else math.factorial(n)
    else:
        raise KeyError(f"unknown group {name!r}")
    got = g.order()
    if got != expected:
        raise ValueError(f"{name}: order {got} differs from expected {expected}")
    return g


def group_info(name: str) -> dict:
    from .perm import format_cycles

    g = load_atlas(name)
    return {
        "name": g.name,
        "degree": g.degree,
        "order": str(g.order()),
        "transitive": g.is_transitive(),
        "base": g.chain.base,
        "generators": [format_cycles(p) for p in g.generators],
    }


@dataclass
class ExampleFixture:
    group: PermGroup
    h: object  # SubgroupHandle
    elements: dict  # name -> Permutation for x, y, z, w, g1..g4

    @property
    def candidates(self) -> list[Permutation]:
        return [self.elements[f"g{i}"] for i in range(1, 5)]


def load_example_fixture() -> ExampleFixture:
    from .subgroups import SubgroupHandle

    a24 = load_atlas("A24")
    els = {k: parse_cycles(v, 24) for k, v in EXAMPLE_CYCLES.items()}
    h = SubgroupHandle(a24, [els[k] for k in "xyzw"], check=True)
    return ExampleFixture(a24, h, els)


# --- index table -------------------------------------------------------------

INDEX_TABLE = [
    # (T, G, |T|, |G|, stated index as (a, b) with index = 2^a 3^b)
    ("M11", "PSL(2,11)", MATHIEU_ORDERS["M11"], order_psl(2, 11), (2, 1)),
    ("M12", "M11", MATHIEU_ORDERS["M12"], MATHIEU_ORDERS["M11"], (2, 1)),
    ("M24", "M23", MATHIEU_ORDERS["M24"], MATHIEU_ORDERS["M23"], (3, 1)),
    ("PSU(3,3)", "PSL(2,7)", order_psu(3, 3), order_psl(2, 7), (2, 2)),
    ("A9", "A7", order_alternating(9), order_alternating(7), (3, 2)),
    ("PSp(4,3)", "A6", order_psp(4, 3), order_alternating(6), (3, 2)),
    ("PSp(6,2)", "A8", order_psp(6, 2), order_alternating(8), (3, 2)),
    ("PSU(4,3)", "PSL(3,4)", order_psu(4, 3), order_psl(3, 4), (1, 4)),
    ("M12", "PSL(2,11)", MATHIEU_ORDERS["M12"], order_psl(2, 11), (4, 2)),
    ("PSU(4,3)", "A7", order_psu(4, 3), order_alternating(7), (4, 4)),
    ("G2(3)", "PSL(2,13)", order_g2(3), order_psl(2, 13), (4, 5)),
]


def _valid_an_degrees() -> list[int]:
    return sorted({2**a * 3**b for a in range(5) for b in range(7) if 2**a * 3**b >= 6})


def verify_index_table() -> list[dict]:
    """Check |T|/|G| against each stated index; the A_n row is checked for every n = 2^a 3^b >= 6."""
    rows = []
    for t, g, ot, og, (a, b) in INDEX_TABLE:
        stated = 2**a * 3**b
        ok = ot % og == 0 and ot // og == stated and a <= 4 and b <= 6
        rows.append({"T": t, "G": g, "index": ot // og if ot % og == 0 else None, "stated": stated, "ok": ok})
    an_ok = all(
        order_alternating(n) % order_alternating(n - 1) == 0
        and order_alternating(n) // order_alternating(n - 1) == n
        for n in _valid_an_degrees()
    )
    rows.append({"T": "A_n", "G": "A_(n-1)", "index": "n", "stated": "n = 2^a 3^b", "ok": an_ok})
    return rows


def check_m11_regular(h, m12: PermGroup | None = None) -> bool:
    """Whether the point stabilizer M11 of M12 acts regularly on the cosets of ``h``.

    M11 is regular on [M12 : H] exactly when M11 meets H trivially and
    |M11| * |H| = |M12|.
    """
    from .subgroups import SubgroupHandle, intersect

    m12 = m12 or load_atlas("M12")
    m11 = m12.point_stabilizer(m12.degree - 1)
    m11h = SubgroupHandle(m12, m11.generators, order=m11.order())
    if m11.order() * h.order() != m12.order():
        return False
    return intersect(h, m11h).order() == 1

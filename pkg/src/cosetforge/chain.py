"""Base and strong generating sets (Schreier-Sims) and the PermGroup type.

Transversals are Schreier vectors: each orbit point records the index of
the strong generator that first reached it. Explicit transversal elements are
cached only while ``orbit size * degree`` stays small, so degree-7920 coset
actions keep O(degree) memory per level.
"""

from __future__ import annotations

import logging
import random
from typing import Iterable, Iterator, Sequence

from .perm import Permutation, inverse, is_identity, mul, parse_cycles

logger = logging.getLogger(__name__)

_CACHE_LIMIT = 4_000_000  # orbit_size * degree below which transversals are stored


class _Level:
    __slots__ = ("base", "gens", "invs", "orbit", "sv", "_u", "_uinv", "cache")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[tuple] = []
        self.invs: list[tuple] = []
        self.orbit: list[int] = [base]
        self.sv: dict[int, int] = {base: -1}
        ident = tuple(range(degree))
        self._u = {base: ident}
        self._uinv = {base: ident}
        self.cache = True

    def add_gen(self, g: tuple, degree: int) -> None:
        self.gens.append(g)
        self.invs.append(inverse(g))
        self._extend(degree)

    def _extend(self, degree: int) -> None:
        # Grows the orbit without re-parenting known points, so previously
        # computed transversal elements stay valid.
        sv, orbit, gens = self.sv, self.orbit, self.gens
        queue = list(orbit)
        k = 0
        while k < len(queue):
            pt = queue[k]
            k += 1
            for j, g in enumerate(gens):
                im = g[pt]
                if im not in sv:
                    sv[im] = j
                    orbit.append(im)
                    queue.append(im)
        if self.cache and len(orbit) * degree > _CACHE_LIMIT:
            self.cache = False
            self._u.clear()
            self._uinv.clear()

    def u(self, pt: int, degree: int) -> tuple:
        """Transversal element mapping the base point to ``pt``."""
        if self.cache:
            got = self._u.get(pt)
            if got is not None:
                return got
        path = []
        cur = pt
        sv, invs = self.sv, self.invs
        while True:
            j = sv[cur]
            if j < 0:
                break
            path.append(j)
            cur = invs[j][cur]
        h = tuple(range(degree))
        for j in reversed(path):
            h = mul(h, self.gens[j])
        if self.cache:
            self._u[pt] = h
        return h

    def uinv(self, pt: int, degree: int) -> tuple:
        if self.cache:
            got = self._uinv.get(pt)
            if got is None:
                got = inverse(self.u(pt, degree))
                self._uinv[pt] = got
            return got
        return inverse(self.u(pt, degree))

    def strip_step(self, h: tuple, degree: int) -> tuple:
        """Return ``h * u_b^-1`` where ``b = h[base]`` (assumed in the orbit)."""
        if self.cache:
            return mul(h, self.uinv(h[self.base], degree))
        sv, invs = self.sv, self.invs
        while True:
            pt = h[self.base]
            j = sv[pt]
            if j < 0:
                return h
            h = mul(h, invs[j])


class StabilizerChain:
    """Base and strong generating set for a permutation group."""

    def __init__(self, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    @property
    def strong_generators(self) -> list[Permutation]:
        seen, out = set(), []
        for lv in self.levels:
            for g in lv.gens:
                if g not in seen:
                    seen.add(g)
                    out.append(Permutation(g, check=False))
        return out

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.orbit)
        return n

    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def strip(self, g: Sequence[int], start: int = 0) -> tuple[tuple, int]:
        """Sift ``g`` from level ``start``; return (residue, level reached)."""
        h = tuple(g)
        n = self.degree
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            if h[lv.base] not in lv.sv:
                return h, i
            h = lv.strip_step(h, n)
        return h, len(self.levels)

    def contains(self, g: Sequence[int]) -> bool:
        if len(g) != self.degree:
            return False
        h, _ = self.strip(g)
        return is_identity(h)

    def _new_level_for(self, h: tuple) -> None:
        moved = next(i for i, x in enumerate(h) if i != x)
        self.levels.append(_Level(moved, self.degree))

    def _absorb(self, g: tuple) -> bool:
        """Sift ``g``; if it does not sift to the identity, add the residue."""
        h, j = self.strip(g)
        if j == len(self.levels) and is_identity(h):
            return False
        if j == len(self.levels):
            self._new_level_for(h)
        # the residue fixes base[:j] pointwise, so it belongs to levels 0..j
        for lvl in range(0, j + 1):
            lv = self.levels[lvl]
            if h not in lv.gens:
                lv.add_gen(h, self.degree)
        return True

    def random_element(self, rng: random.Random) -> Permutation:
        n = self.degree
        g = tuple(range(n))
        for lv in reversed(self.levels):
            pt = lv.orbit[rng.randrange(len(lv.orbit))]
            g = mul(g, lv.u(pt, n))
        return Permutation(g, check=False)

    def iter_elements(self, top_indices: Iterable[int] | None = None) -> Iterator[tuple]:
        """Yield every element exactly once as a plain tuple.

        Elements are products ``t_{k-1} ... t_1 t_0`` of transversal elements;
        ``top_indices`` restricts ``t_0`` to the given positions of the top
        orbit (used for sharding).
        """
        n = self.degree
        levels = self.levels
        if not levels:
            if top_indices is None or 0 in set(top_indices):
                yield tuple(range(n))
            return
        trans = []
        for lv in levels:
            trans.append([lv.u(pt, n) for pt in lv.orbit])
        top = trans[0] if top_indices is None else [trans[0][i] for i in top_indices]
        k = len(levels)

        def rec(i: int, prefix: tuple) -> Iterator[tuple]:
            if i == 0:
                for t in top:
                    yield mul(prefix, t)
                return
            for t in trans[i]:
                yield from rec(i - 1, mul(prefix, t))

        yield from rec(k - 1, tuple(range(n)))

    def level_suffix(self, start: int) -> StabilizerChain:
        sub = StabilizerChain(self.degree)
        sub.levels = self.levels[start:]
        return sub

    def verify(self) -> bool:
        """Deterministic completeness check: every Schreier generator sifts."""
        n = self.degree
        for i, lv in enumerate(self.levels):
            for beta in lv.orbit:
                ub = lv.u(beta, n)
                for s in lv.gens:
                    gamma = s[beta]
                    sch = mul(mul(ub, s), lv.uinv(gamma, n))
                    h, j = self.strip(sch, i + 1)
                    if j < len(self.levels) or not is_identity(h):
                        return False
        return True

    @classmethod
    def from_bsgs(cls, degree: int, base: Sequence[int], strong: Iterable[Sequence[int]]) -> StabilizerChain:
        """Chain from a base and strong generating set known to be complete."""
        chain = cls(degree)
        strong = [tuple(g) for g in strong]
        for i, b in enumerate(base):
            lv = _Level(b, degree)
            for g in strong:
                if all(g[p] == p for p in base[:i]):
                    lv.gens.append(g)
                    lv.invs.append(inverse(g))
            lv._extend(degree)
            chain.levels.append(lv)
        while chain.levels and len(chain.levels[-1].orbit) == 1:
            chain.levels.pop()
        return chain


def build_chain(
    gens: Sequence[Sequence[int]],
    degree: int | None = None,
    base_prefix: Sequence[int] = (),
    known_order: int | None = None,
    seed: int = 0,
    order_bound: int | None = None,
) -> StabilizerChain:
    """Build a stabilizer chain for ``<gens>``.

    A seeded random phase proposes strong generators; the result is then
    either certified by ``known_order`` (the exact order, an error if not
    reached) or by ``order_bound`` (an upper bound, e.g. the order of an
    overgroup), or completed deterministically by checking every Schreier
    generator. A partial chain never overstates the order, so reaching the
    trusted value certifies completeness. Both routes are reproducible for
    a fixed input.
    """
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generator list")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree:
            raise ValueError(f"degree mismatch: {len(g)} vs {degree}")
    chain = StabilizerChain(degree)
    for b in base_prefix:
        chain.levels.append(_Level(b, degree))
    nontrivial = []
    for g in gens:
        if not is_identity(g) and g not in nontrivial:
            nontrivial.append(g)
    if not nontrivial:
        chain.levels = []
        return chain
    for g in nontrivial:
        if all(g[lv.base] == lv.base for lv in chain.levels):
            chain._new_level_for(g)
    for g in nontrivial:
        for lv in chain.levels:
            lv.add_gen(g, degree)
            if g[lv.base] != lv.base:
                break

    target = known_order if known_order is not None else order_bound
    _random_phase(chain, nontrivial, seed, target)
    if target is not None and chain.order() == target:
        _drop_trivial_tail(chain, len(base_prefix))
        return chain
    _complete(chain)
    if known_order is not None and chain.order() != known_order:
        raise ValueError(f"group order {chain.order()} differs from expected {known_order}")
    _drop_trivial_tail(chain, len(base_prefix))
    return chain


def _drop_trivial_tail(chain: StabilizerChain, keep: int) -> None:
    while len(chain.levels) > keep and len(chain.levels[-1].orbit) == 1:
        chain.levels.pop()


def _random_phase(chain: StabilizerChain, gens: list[tuple], seed: int, known_order: int | None) -> None:
    rng = random.Random(seed)
    n = chain.degree
    # product replacement state
    state = list(gens)
    while len(state) < 10:
        state.append(gens[len(state) % len(gens)])
    acc = tuple(range(n))
    for _ in range(50):
        i, j = rng.sample(range(len(state)), 2)
        state[i] = mul(state[i], state[j])
    streak = 0
    # without a certifying order the deterministic completion does the real work
    patience = 25 if known_order is None else 500
    while streak < patience:
        if known_order is not None:
            o = chain.order()
            if o == known_order:
                return
            if o > known_order:
                raise ValueError(f"group order exceeds expected {known_order}")
        i, j = rng.sample(range(len(state)), 2)
        if rng.random() < 0.5:
            state[i] = mul(state[i], state[j])
        else:
            state[i] = mul(state[j], state[i])
        acc = mul(acc, state[i])
        if chain._absorb(acc):
            streak = 0
        else:
            streak += 1


def _complete(chain: StabilizerChain) -> None:
    """Deterministic Schreier-Sims completion of a partial chain."""
    n = chain.degree
    checked: list[set] = [set() for _ in chain.levels]
    i = len(chain.levels) - 1
    while i >= 0:
        lv = chain.levels[i]
        done = checked[i]
        restart = False
        k = 0
        while k < len(lv.orbit) and not restart:
            beta = lv.orbit[k]
            k += 1
            ub = None
            for si in range(len(lv.gens)):
                if (beta, si) in done:
                    continue
                s = lv.gens[si]
                if ub is None:
                    ub = lv.u(beta, n)
                sch = mul(mul(ub, s), lv.uinv(s[beta], n))
                done.add((beta, si))
                if is_identity(sch):
                    continue
                h, j = chain.strip(sch, i + 1)
                if j == len(chain.levels) and is_identity(h):
                    continue
                if j == len(chain.levels):
                    chain._new_level_for(h)
                    checked.append(set())
                for lvl in range(i + 1, j + 1):
                    chain.levels[lvl].add_gen(h, n)
                i = j
                restart = True
                break
        if not restart:
            i -= 1


class PermGroup:
    """Permutation group given by generators, with a lazily built chain."""

    def __init__(
        self,
        generators: Iterable[Sequence[int]],
        degree: int | None = None,
        name: str | None = None,
        order: int | None = None,
        base_prefix: Sequence[int] = (),
    ):
        gens = [p if isinstance(p, Permutation) else Permutation(p) for p in generators]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise ValueError(f"degree mismatch: {len(g)} vs {degree}")
        self.degree = degree
        self.generators = gens
        self.name = name
        # "alternating" / "symmetric" when this is A_n / S_n on its natural n points
        self.natural: str | None = None
        self._known_order = order
        self._base_prefix = tuple(base_prefix)
        self._chain: StabilizerChain | None = None

    @classmethod
    def from_chain(cls, chain: StabilizerChain, generators=None, name=None) -> PermGroup:
        gens = generators if generators is not None else chain.strong_generators
        g = cls(gens, degree=chain.degree, name=name)
        g._chain = chain
        return g

    @classmethod
    def from_cycle_strings(cls, strings: Iterable[str], degree: int, name: str | None = None) -> PermGroup:
        return cls([parse_cycles(s, degree) for s in strings], degree=degree, name=name)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = build_chain(
                self.generators, self.degree, self._base_prefix, known_order=self._known_order
            )
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def __len__(self) -> int:
        return self.order()

    def contains(self, p: Sequence[int]) -> bool:
        return self.chain.contains(p)

    __contains__ = contains

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def orbit(self, v: int) -> list[int]:
        seen = {v}
        out = [v]
        for pt in out:
            for g in self.generators:
                im = g[pt]
                if im not in seen:
                    seen.add(im)
                    out.append(im)
        return out

    def orbits(self) -> list[list[int]]:
        seen = set()
        res = []
        for v in range(self.degree):
            if v not in seen:
                orb = sorted(self.orbit(v))
                seen.update(orb)
                res.append(orb)
        return res

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def point_stabilizer(self, v: int) -> PermGroup:
        if not 0 <= v < self.degree:
            raise ValueError(f"point {v} out of range")
        chain = self.chain
        if chain.levels and chain.levels[0].base == v:
            sub = chain.level_suffix(1)
        elif not any(g[v] != v for g in self.generators):
            return self
        else:
            sub = build_chain(
                self.generators, self.degree, (v,), known_order=self.order()
            ).level_suffix(1)
        return PermGroup.from_chain(sub, name=f"{self.name}_{v}" if self.name else None)

    def random_element(self, seed: int | random.Random = 0) -> Permutation:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        return self.chain.random_element(rng)

    def elements(self) -> Iterator[Permutation]:
        for g in self.chain.iter_elements():
            yield Permutation(g, check=False)

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def __repr__(self) -> str:
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} gens={len(self.generators)}>"

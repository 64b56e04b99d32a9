"""Permutations in image-array form.

Points are 0-based internally. The action is left-to-right: ``p * q`` maps
``i`` to ``q[p[i]]``, so conjugation ``p.conj(g)`` is ``g^-1 * p * g``.
Text I/O uses 1-based disjoint cycle notation, e.g. ``(1,2)(3,7)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class Permutation(tuple):
    """Immutable bijection on ``range(degree)``, stored as its image tuple."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = (), check: bool = True):
        self = super().__new__(cls, images)
        if check and sorted(self) != list(range(len(self))):
            raise ValueError("images do not form a permutation")
        return self

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return tuple.__new__(cls, range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            for pt in cyc:
                if not 0 <= pt < degree:
                    raise ValueError(f"point {pt} out of range for degree {degree}")
                if pt in seen:
                    raise ValueError(f"point {pt} repeated")
                seen.add(pt)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a] = b
        return tuple.__new__(cls, img)

    @property
    def degree(self) -> int:
        return len(self)

    @property
    def images(self) -> tuple:
        return tuple(self)

    def __call__(self, i: int) -> int:
        return self[i]

    def __mul__(self, other):
        return compose(self, other)

    __matmul__ = __mul__

    def __rmul__(self, other):
        return NotImplemented

    def __add__(self, other):
        return NotImplemented

    def __invert__(self) -> Permutation:
        return self.inverse()

    def inverse(self) -> Permutation:
        return tuple.__new__(Permutation, inverse(self))

    def __pow__(self, k: int) -> Permutation:
        return tuple.__new__(Permutation, power(self, k))

    def conj(self, g: Sequence[int]) -> Permutation:
        """Return ``g^-1 * self * g``."""
        return tuple.__new__(Permutation, conjugate(self, g))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self))

    def cycles(self) -> CycleDecomposition:
        return cycle_decomposition(self)

    def cycle_type(self) -> tuple:
        return tuple(sorted(len(c) for c in cycle_decomposition(self).cycles))

    def order(self) -> int:
        return order_of(self)

    def sign(self) -> int:
        return sign(self)

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self) if i != x]

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={len(self)})"

    def __str__(self) -> str:
        return format_cycles(self)


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple  # tuples of length >= 2, each starting at its smallest point
    fixed_points: tuple

    @property
    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles)) if self.cycles else 1


# Raw-tuple helpers used in hot loops; they accept any int sequence.

def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    if len(p) != len(q):
        raise ValueError(f"degree mismatch: {len(p)} vs {len(q)}")
    return tuple.__new__(Permutation, map(q.__getitem__, p))


def mul(p, q) -> tuple:
    """Unchecked left-to-right product as a plain tuple."""
    return tuple(map(q.__getitem__, p))


def inverse(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def conjugate(p, g) -> tuple:
    """``g^-1 p g`` as a plain tuple: maps g[i] to g[p[i]]."""
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[g[i]] = g[x]
    return tuple(out)


def power(p, k: int) -> tuple:
    n = len(p)
    if k < 0:
        p, k = inverse(p), -k
    result = tuple(range(n))
    base = tuple(p)
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def is_identity(p) -> bool:
    return all(i == x for i, x in enumerate(p))


def cycle_lengths(p) -> list[int]:
    n = len(p)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        j, k = i, 0
        while not seen[j]:
            seen[j] = 1
            j = p[j]
            k += 1
        out.append(k)
    return out


def cycle_decomposition(p) -> CycleDecomposition:
    n = len(p)
    seen = bytearray(n)
    cycles, fixed = [], []
    for i in range(n):
        if seen[i]:
            continue
        if p[i] == i:
            seen[i] = 1
            fixed.append(i)
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = 1
            cyc.append(j)
            j = p[j]
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles), tuple(fixed))


def order_of(p) -> int:
    return math.lcm(*cycle_lengths(p)) if len(p) else 1


def is_two_element(p) -> bool:
    k = order_of(p)
    return k & (k - 1) == 0


def sign(p) -> int:
    """+1 for even permutations, -1 for odd."""
    n_even_cycles = sum(1 for k in cycle_lengths(p) if k % 2 == 0)
    return -1 if n_even_cycles % 2 else 1


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based disjoint cycle notation into a 0-based permutation.

    Cycle entries may be separated by commas and/or whitespace. The empty
    string and ``()`` both denote the identity.
    """
    stripped = re.sub(r"\s+", " ", text).strip()
    if _CYCLE_RE.sub("", stripped).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        tokens = [t for t in re.split(r"[,\s]+", body.strip()) if t]
        if not tokens:
            continue
        try:
            pts = [int(t) - 1 for t in tokens]
        except ValueError:
            raise ValueError(f"malformed cycle notation: {text!r}") from None
        cycles.append(pts)
    return Permutation.from_cycles(cycles, degree)


def format_cycles(p) -> str:
    """1-based cycle notation with each cycle starting at its least point."""
    cycles = cycle_decomposition(p).cycles
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cycles)


def random_permutation(degree: int, rng) -> Permutation:
    img = list(range(degree))
    rng.shuffle(img)
    return tuple.__new__(Permutation, img)

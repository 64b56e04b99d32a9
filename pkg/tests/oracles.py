"""Brute-force oracles used by the tests. They share no code with the package."""

from __future__ import annotations

import random
from itertools import permutations


def compose(p, q):
    # left-to-right: i -> q[p[i]]
    return tuple(q[i] for i in p)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens, n, cap=None):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, tuple(g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if cap is not None and len(seen) > cap:
                        return None
        frontier = nxt
    return seen


def elem_order(p):
    ident = tuple(range(len(p)))
    k, q = 1, tuple(p)
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


def random_group(rng: random.Random, max_degree=8, max_order=10_000):
    """Random generators on up to ``max_degree`` points whose closure stays small."""
    while True:
        n = rng.randint(3, max_degree)
        k = rng.randint(1, 3)
        gens = []
        for _ in range(k):
            img = list(range(n))
            rng.shuffle(img)
            gens.append(tuple(img))
        els = closure(gens, n, cap=max_order)
        if els is not None:
            return n, gens, els


def aut_order(n, edges):
    es = {frozenset(e) for e in edges}
    count = 0
    for p in permutations(range(n)):
        if all(frozenset((p[u], p[v])) in es for u, v in edges):
            count += 1
    return count


def count_s_arcs(adj, s):
    n = len(adj)
    arcs = [[v] for v in range(n)]
    for _ in range(s):
        nxt = []
        for a in arcs:
            for u in adj[a[-1]]:
                if len(a) >= 2 and u == a[-2]:
                    continue
                nxt.append(a + [u])
        arcs = nxt
    return len(arcs)

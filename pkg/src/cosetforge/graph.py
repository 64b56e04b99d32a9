"""Immutable simple graphs plus sparse6 and edge-list serialization."""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from typing import Iterable, Sequence


class SimpleGraph:
    """Undirected graph on ``range(n)`` with sorted adjacency tuples."""

    __slots__ = ("n", "adj", "labels")

    def __init__(self, n: int, adjacency: Sequence[Iterable[int]], labels: Sequence | None = None):
        adj = tuple(tuple(sorted(set(a))) for a in adjacency)
        if len(adj) != n:
            raise ValueError(f"adjacency has {len(adj)} rows for {n} vertices")
        for v, nb in enumerate(adj):
            for u in nb:
                if u == v:
                    raise ValueError(f"loop at vertex {v}")
                if not 0 <= u < n:
                    raise ValueError(f"neighbor {u} out of range")
        for v, nb in enumerate(adj):
            for u in nb:
                if not _sorted_has(adj[u], v):
                    raise ValueError(f"adjacency not symmetric at edge ({v},{u})")
        self.n = n
        self.adj = adj
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> SimpleGraph:
        adj: list[set] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, adj, labels)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, SimpleGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"<SimpleGraph n={self.n} m={self.edge_count()}>"

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return _sorted_has(self.adj[u], v)

    def valency(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        if self.n == 0:
            return 0
        d = len(self.adj[0])
        return d if all(len(a) == d for a in self.adj) else None

    def is_regular(self) -> bool:
        return self.valency() is not None

    def relabel(self, perm: Sequence[int]) -> SimpleGraph:
        """Graph with vertex v renamed perm[v]."""
        return SimpleGraph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if len(perm) != self.n:
            return False
        adj = self.adj
        for v in range(self.n):
            img = sorted(perm[u] for u in adj[v])
            if tuple(img) != adj[perm[v]]:
                return False
        return True

    def is_connected(self) -> bool:
        return is_connected(self)

    # serialization

    def to_sparse6(self, header: bool = False) -> bytes:
        return to_sparse6(self, header)

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())


def _sorted_has(seq: tuple, x: int) -> bool:
    i = bisect_left(seq, x)
    return i < len(seq) and seq[i] == x


def is_connected(graph: SimpleGraph) -> bool:
    if graph.n == 0:
        return True
    seen = bytearray(graph.n)
    seen[0] = 1
    q = deque([0])
    count = 1
    adj = graph.adj
    while q:
        v = q.popleft()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = 1
                count += 1
                q.append(u)
    return count == graph.n


def components(graph: SimpleGraph) -> list[list[int]]:
    seen = bytearray(graph.n)
    out = []
    for s in range(graph.n):
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        for v in comp:
            for u in graph.adj[v]:
                if not seen[u]:
                    seen[u] = 1
                    comp.append(u)
        out.append(sorted(comp))
    return out


# --- sparse6 -------------------------------------------------------------------


def _encode_n(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ValueError("too many vertices for sparse6")


def _decode_n(data: bytes) -> tuple[int, bytes]:
    if not data:
        raise ValueError("empty sparse6 body")
    if data[0] != 126:
        return data[0] - 63, data[1:]
    if len(data) > 1 and data[1] == 126:
        vals = [c - 63 for c in data[2:8]]
        rest = data[8:]
    else:
        vals = [c - 63 for c in data[1:4]]
        rest = data[4:]
    n = 0
    for v in vals:
        if not 0 <= v < 64:
            raise ValueError("malformed sparse6 vertex count")
        n = (n << 6) | v
    return n, rest


def _bit_width(n: int) -> int:
    k = 1
    while (1 << k) < n:
        k += 1
    return k


def to_sparse6(graph: SimpleGraph, header: bool = False) -> bytes:
    """Encode as sparse6 (with trailing newline)."""
    n = graph.n
    k = _bit_width(n)
    bits: list[int] = []

    def put(x: int) -> None:
        bits.extend((x >> (k - 1 - i)) & 1 for i in range(k))

    edges = sorted((max(u, v), min(u, v)) for u, v in graph.edges())
    cur = 0
    for v, u in edges:
        if v == cur:
            bits.append(0)
            put(u)
        elif v == cur + 1:
            cur += 1
            bits.append(1)
            put(u)
        else:
            cur = v
            bits.append(1)
            put(v)
            bits.append(0)
            put(u)
    pad = (-len(bits)) % 6
    if k < 6 and n == (1 << k) and pad >= k and cur < n - 1:
        # padding with ones would otherwise read as an edge to vertex n-1
        bits.append(0)
        pad = (-len(bits)) % 6
    bits.extend([1] * pad)
    body = bytes(
        63 + ((bits[i] << 5) | (bits[i + 1] << 4) | (bits[i + 2] << 3) | (bits[i + 3] << 2) | (bits[i + 4] << 1) | bits[i + 5])
        for i in range(0, len(bits), 6)
    )
    prefix = b">>sparse6<<:" if header else b":"
    return prefix + _encode_n(n) + body + b"\n"


def from_sparse6(data: bytes | str) -> SimpleGraph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(b">>sparse6<<"):
        data = data[len(b">>sparse6<<"):]
    if not data.startswith(b":"):
        raise ValueError("not sparse6 data (missing ':')")
    n, body = _decode_n(data[1:])
    k = _bit_width(n)
    bits = []
    for c in body:
        d = c - 63
        if not 0 <= d < 64:
            raise ValueError("malformed sparse6 byte")
        bits.extend((d >> (5 - i)) & 1 for i in range(6))
    edges = set()
    v = 0
    i = 0
    while i + 1 + k <= len(bits):
        b = bits[i]
        x = 0
        for j in range(k):
            x = (x << 1) | bits[i + 1 + j]
        i += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        else:
            if x == v:
                raise ValueError("sparse6 data contains a loop")
            edges.add((x, v))
    return SimpleGraph.from_edges(n, edges)


def from_edge_list(text: str, n: int | None = None) -> SimpleGraph:
    edges = []
    top = -1
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        top = max(top, u, v)
    return SimpleGraph.from_edges(n if n is not None else top + 1, edges)


def read_graph(path: str) -> SimpleGraph:
    with open(path, "rb") as fh:
        data = fh.read()
    head = data.lstrip()
    if head.startswith(b":") or head.startswith(b">>sparse6<<"):
        return from_sparse6(head.splitlines()[0])
    return from_edge_list(data.decode("ascii"))


def write_graph(graph: SimpleGraph, path: str, fmt: str = "sparse6") -> None:
    if fmt == "sparse6":
        payload = graph.to_sparse6()
    elif fmt == "edges":
        payload = graph.to_edge_list().encode("ascii")
    else:
        raise ValueError(f"unknown graph format {fmt!r}")
    with open(path, "wb") as fh:
        fh.write(payload)

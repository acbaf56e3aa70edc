"""Simple graphs: graph6 I/O, constructions, equitable partitions, enumeration.

Vertices are always labeled ``0..n-1``. Products pair vertices row-major,
``(u, x) -> u * h.n + x``, and :func:`rooted_product_k2` appends the pendant
block after the base graph, so the block formulas in :mod:`avgmix.mixing`
line up positionally.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError, PartitionError, UnsupportedSize

GRAPH6_MAX_N = 62
ENUMERATION_MAX_N = 6


class HamiltonianKind(str, enum.Enum):
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"

    @classmethod
    def parse(cls, value) -> "HamiltonianKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"a": cls.ADJACENCY, "adj": cls.ADJACENCY, "l": cls.LAPLACIAN, "lap": cls.LAPLACIAN}
        if key in aliases:
            return aliases[key]
        return cls(key)

    @property
    def short(self) -> str:
        return "A" if self is HamiltonianKind.ADJACENCY else "L"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph stored as a sorted tuple of edges ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.asarray(adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise ValueError("adjacency must have a zero diagonal")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], tuple(zip(iu.tolist(), ju.tolist())))

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        if self.edges:
            e = np.array(self.edges)
            a[e[:, 0], e[:, 1]] = 1
            a[e[:, 1], e[:, 0]] = 1
        a.setflags(write=False)
        return a

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def neighbors(self, v: int) -> list[int]:
        return np.flatnonzero(self.adjacency[v]).tolist()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])

    def is_regular(self) -> bool:
        d = self.degrees()
        return bool(np.all(d == d[0]))

    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph whose vertex ``perm[v]`` plays the role of ``v`` here."""
        return Graph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges}, g6={write_graph6(self)!r})" if self.n <= GRAPH6_MAX_N \
            else f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class VertexPartition:
    cells: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(int(v) for v in c) for c in self.cells))

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def __len__(self):
        return len(self.cells)

    def validate(self, n: int) -> None:
        seen = []
        for c in self.cells:
            if not c:
                raise PartitionError("empty cell")
            seen.extend(c)
        if sorted(seen) != list(range(n)):
            raise PartitionError(f"cells do not partition 0..{n - 1} exactly: {self.cells}")


# --------------------------------------------------------------------------- graph6


def _pair_order(n: int) -> list[tuple[int, int]]:
    # upper triangle, column by column: (0,1), (0,2), (1,2), (0,3), ...
    return [(i, j) for j in range(1, n) for i in range(j)]


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise ParseError("empty graph6 string")
    if any(not (63 <= ord(c) <= 126) for c in s):
        raise ParseError(f"invalid character in graph6 string {s!r}")
    first = ord(s[0]) - 63
    if first == 63:
        raise ParseError("long-form length header ('~') is not supported; n must be <= 62")
    n = first
    if n < 1:
        raise ParseError("graph6 string encodes a graph with no vertices")
    nbits = n * (n - 1) // 2
    nchars = -(-nbits // 6)
    payload = s[1:]
    if len(payload) != nchars:
        raise ParseError(f"expected {nchars} payload characters for n={n}, got {len(payload)}")
    bits = []
    for c in payload:
        x = ord(c) - 63
        bits.extend((x >> k) & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits")
    edges = tuple(p for p, b in zip(_pair_order(n), bits) if b)
    return Graph(n, edges)


def write_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise UnsupportedSize(f"graph6 short form supports n <= {GRAPH6_MAX_N}, got {g.n}")
    a = g.adjacency
    bits = [int(a[i, j]) for i, j in _pair_order(g.n)]
    bits.extend([0] * (-len(bits) % 6))
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        x = 0
        for b in bits[k:k + 6]:
            x = (x << 1) | b
        out.append(chr(x + 63))
    return "".join(out)


def read_graph6_lines(lines: Iterable[str], strict: bool = False, issues: list | None = None) -> Iterator[tuple[int, str, Graph]]:
    """Yield ``(lineno, text, graph)`` for every non-blank line.

    Bad lines raise :class:`ParseError` in strict mode; otherwise they are
    appended to ``issues`` as ``(lineno, message)`` and skipped.
    """
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            continue
        try:
            g = parse_graph6(s)
        except ParseError as exc:
            if strict:
                raise ParseError(str(exc), lineno) from exc
            if issues is not None:
                issues.append((lineno, str(exc)))
            continue
        yield lineno, s, g


# --------------------------------------------------------------------------- Hamiltonians


def hamiltonian(g: Graph, kind: HamiltonianKind | str = HamiltonianKind.ADJACENCY) -> np.ndarray:
    kind = HamiltonianKind.parse(kind)
    a = g.adjacency.astype(float)
    if kind is HamiltonianKind.ADJACENCY:
        return a
    return np.diag(a.sum(axis=1)) - a


# --------------------------------------------------------------------------- named graphs


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the centre at vertex 0."""
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


# --------------------------------------------------------------------------- constructions


def complement(g: Graph) -> Graph:
    present = set(g.edges)
    return Graph(g.n, tuple(p for p in itertools.combinations(range(g.n), 2) if p not in present))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = tuple((u + g.n, v + g.n) for u, v in h.edges)
    return Graph(g.n + h.n, g.edges + shifted)


def cartesian_product(g: Graph, h: Graph) -> Graph:
    a = np.kron(g.adjacency, np.eye(h.n, dtype=np.int64)) + np.kron(np.eye(g.n, dtype=np.int64), h.adjacency)
    return Graph.from_adjacency(a)


def categorical_product(g: Graph, h: Graph) -> Graph:
    return Graph.from_adjacency(np.kron(g.adjacency, h.adjacency))


def rooted_product_k2(g: Graph) -> Graph:
    """Attach a pendant vertex ``n + i`` to every vertex ``i``."""
    return Graph(2 * g.n, g.edges + tuple((i, g.n + i) for i in range(g.n)))


def clique_partition_graph(n: int, partition: VertexPartition) -> Graph:
    """Disjoint union of cliques placed on the cells of ``partition`` (labels kept)."""
    partition.validate(n)
    edges = [e for cell in partition.cells for e in itertools.combinations(sorted(cell), 2)]
    return Graph(n, tuple(edges))


def connected_components(g: Graph) -> list[list[int]]:
    a = g.adjacency
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], [s]
        while stack:
            v = stack.pop()
            for w in np.flatnonzero(a[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
                    comp.append(int(w))
        comps.append(sorted(comp))
    return comps


# --------------------------------------------------------------------------- equitable partitions


def _cell_counts(a: np.ndarray, colors: np.ndarray, ncolors: int) -> np.ndarray:
    onehot = np.zeros((len(colors), ncolors), dtype=np.int64)
    onehot[np.arange(len(colors)), colors] = 1
    return a @ onehot


def is_equitable(g: Graph, p: VertexPartition) -> bool:
    p.validate(g.n)
    colors = np.empty(g.n, dtype=np.int64)
    for k, cell in enumerate(p.cells):
        colors[list(cell)] = k
    counts = _cell_counts(g.adjacency, colors, len(p.cells))
    return all(np.all(counts[list(cell)] == counts[cell[0]]) for cell in p.cells)


def coarsest_equitable_partition(g: Graph) -> VertexPartition:
    """Colour refinement from the one-cell partition; cells ordered by smallest vertex."""
    colors = np.zeros(g.n, dtype=np.int64)
    ncolors = 1
    while True:
        counts = _cell_counts(g.adjacency, colors, ncolors)
        sigs = [(int(colors[v]),) + tuple(counts[v].tolist()) for v in range(g.n)]
        relabel: dict = {}
        new = np.array([relabel.setdefault(s, len(relabel)) for s in sigs], dtype=np.int64)
        if len(relabel) == ncolors:
            break
        colors, ncolors = new, len(relabel)
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(int(colors[v]), []).append(v)
    return VertexPartition(tuple(sorted((tuple(c) for c in cells.values()), key=lambda c: c[0])))


# --------------------------------------------------------------------------- enumeration


@lru_cache(maxsize=None)
def _perm_index_maps(n: int) -> np.ndarray:
    """Row ``k``: for permutation ``k``, where each bit of the relabelled code comes from."""
    pairs = _pair_order(n)
    index = {p: k for k, p in enumerate(pairs)}
    rows = [[index[(min(perm[i], perm[j]), max(perm[i], perm[j]))] for i, j in pairs]
            for perm in itertools.permutations(range(n))]
    return np.array(rows, dtype=np.int64)


def _bit_weights(nbits: int) -> np.ndarray:
    return (1 << np.arange(nbits - 1, -1, -1, dtype=np.int64)).astype(np.int64)


def canonical_code(g: Graph) -> int:
    """Lexicographically smallest upper-triangle bit string over all relabellings, as an int."""
    pairs = _pair_order(g.n)
    if not pairs:
        return 0
    bits = np.array([g.adjacency[i, j] for i, j in pairs], dtype=np.int64)
    codes = bits[_perm_index_maps(g.n)] @ _bit_weights(len(pairs))
    return int(codes.min())


def _graph_from_code(n: int, code: int) -> Graph:
    pairs = _pair_order(n)
    L = len(pairs)
    return Graph(n, tuple(p for k, p in enumerate(pairs) if (code >> (L - 1 - k)) & 1))


@lru_cache(maxsize=None)
def _class_codes(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    found = set()
    for code in _class_codes(n - 1):
        base = _graph_from_code(n - 1, code)
        for mask in range(1 << (n - 1)):
            extra = tuple((v, n - 1) for v in range(n - 1) if (mask >> v) & 1)
            found.add(canonical_code(Graph(n, base.edges + extra)))
    return tuple(sorted(found, key=lambda c: (bin(c).count("1"), c)))


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """One canonical representative per isomorphism class, ordered by (edge count, code)."""
    if not 1 <= n <= ENUMERATION_MAX_N:
        raise UnsupportedSize(
            f"built-in enumeration covers 1 <= n <= {ENUMERATION_MAX_N}; for n={n} supply a graph6 "
            "corpus file (e.g. from nauty's geng or scripts/make_corpus.py)"
        )
    for code in _class_codes(n):
        yield _graph_from_code(n, code)

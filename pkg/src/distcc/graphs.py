"""Simple undirected graphs, exact independence numbers and orthogonal representations."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import OddDimension, SizeMismatch, TooLarge

MIS_VERTEX_CAP = 64
HADAMARD_DIM_CAP = 12
ORTH_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Graph:
    adjacency: np.ndarray
    label: str = ""

    def __post_init__(self):
        A = np.array(self.adjacency, dtype=bool, copy=True)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise SizeMismatch(f"adjacency must be square, got {A.shape}")
        if not np.array_equal(A, A.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(A)):
            raise ValueError("self-loops are not allowed")
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)

    @classmethod
    def from_edges(cls, n: int, edges, label: str = "") -> "Graph":
        """Build from 0-based ``(u, v)`` pairs."""
        A = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            A[u, v] = A[v, u] = True
        return cls(A, label)

    @property
    def n_vertices(self) -> int:
        return self.adjacency.shape[0]

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in np.flatnonzero(row)) for row in self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adjacency, 1))
        return [(int(u), int(v)) for u, v in zip(us, vs)]

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    def __repr__(self):
        return f"Graph(n={self.n_vertices}, edges={len(self.edges)}, label={self.label!r})"


@dataclass(frozen=True)
class OrthRepresentation:
    dim: int
    vectors: np.ndarray  # (n_vertices, dim), complex

    def __post_init__(self):
        V = np.array(self.vectors, dtype=complex, copy=True)
        if V.ndim != 2 or V.shape[1] != self.dim:
            raise SizeMismatch(f"vectors must have shape (n, {self.dim}), got {V.shape}")
        norms = np.linalg.norm(V, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-10, rtol=0):
            raise ValueError("representation vectors must be unit vectors")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)


@dataclass(frozen=True)
class OrthReport:
    violations: list[tuple[int, int, float]]  # (u, v, |<psi_u|psi_v>|), 0-based

    @property
    def valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class AdvantageRatio:
    ratio: float
    alpha: int
    beta: int
    advantage: bool


def cycle_graph(N: int) -> Graph:
    if N < 3:
        raise ValueError("cycle graph needs N >= 3")
    return Graph.from_edges(N, [(x, (x + 1) % N) for x in range(N)], label=f"C{N}")


def complete_graph(N: int) -> Graph:
    return Graph(~np.eye(N, dtype=bool), label=f"K{N}")


def hadamard_bits(d: int) -> np.ndarray:
    """Row v holds the big-endian bits of integer v, shape (2**d, d)."""
    v = np.arange(2**d)[:, None]
    return (v >> np.arange(d - 1, -1, -1)) & 1


def hadamard_graph(d: int) -> Graph:
    """Vertices are d-bit strings; edges join strings at Hamming distance d/2."""
    if d % 2:
        raise OddDimension(f"Hadamard graph needs even d, got {d}")
    if d < 2:
        raise ValueError("Hadamard graph needs d >= 2")
    if d > HADAMARD_DIM_CAP:
        raise TooLarge(f"explicit H_d construction capped at d <= {HADAMARD_DIM_CAP}")
    v = np.arange(2**d)
    x = v[:, None] ^ v[None, :]
    dist = np.zeros_like(x)
    for _ in range(d):
        dist += x & 1
        x = x >> 1
    return Graph(dist == d // 2, label=f"H{d}")


def small_graph_catalog() -> list[Graph]:
    """The connected non-isomorphic graphs on three and four vertices."""
    spec = [
        ("path-3", 3, [(0, 1), (1, 2)]),
        ("triangle", 3, [(0, 1), (1, 2), (0, 2)]),
        ("path-4", 4, [(0, 1), (1, 2), (2, 3)]),
        ("star-4", 4, [(0, 1), (0, 2), (0, 3)]),
        ("cycle-4", 4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
        ("paw", 4, [(0, 1), (1, 2), (0, 2), (2, 3)]),
        ("diamond", 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
        ("K4", 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    ]
    return [Graph.from_edges(n, e, label=name) for name, n, e in spec]


def maximum_independent_set(G: Graph) -> tuple[int, ...]:
    """Lexicographically smallest maximum independent set (0-based, sorted).

    Branch and bound over vertex bitmasks. Branching always includes the
    lowest remaining vertex before excluding it, so the first maximum set
    reached is the lexicographically smallest one; pruning uses a greedy
    clique cover of the remaining candidates as the upper bound.
    """
    n = G.n_vertices
    if n > MIS_VERTEX_CAP:
        raise TooLarge(f"exact independence number capped at {MIS_VERTEX_CAP} vertices")
    nbr = [0] * n
    for u, vs in enumerate(G.neighbors):
        for v in vs:
            nbr[u] |= 1 << v

    def clique_cover(P: int) -> int:
        cliques: list[int] = []
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            for i, c in enumerate(cliques):
                if c & ~nbr[v] == 0:
                    cliques[i] = c | low
                    break
            else:
                cliques.append(low)
        return len(cliques)

    best: list[int] = []
    current: list[int] = []

    def search(P: int) -> None:
        nonlocal best
        if P == 0:
            if len(current) > len(best):
                best = current.copy()
            return
        if len(current) + clique_cover(P) <= len(best):
            return
        low = P & -P
        v = low.bit_length() - 1
        current.append(v)
        search(P & ~nbr[v] & ~low)
        current.pop()
        search(P & ~low)

    search((1 << n) - 1)
    return tuple(best)


def independence_number(G: Graph) -> int:
    return len(maximum_independent_set(G))


def verify_orth_representation(G: Graph, rep: OrthRepresentation) -> OrthReport:
    if rep.vectors.shape[0] != G.n_vertices:
        raise SizeMismatch(
            f"{rep.vectors.shape[0]} vectors supplied for {G.n_vertices} vertices"
        )
    gram = np.abs(rep.vectors.conj() @ rep.vectors.T)
    bad = [(u, v, float(gram[u, v])) for u, v in G.edges if gram[u, v] > ORTH_TOL]
    return OrthReport(bad)


def advantage_ratio(G: Graph, beta: int) -> AdvantageRatio:
    """Guaranteed classical/quantum distinguishability ratio at perfect success.

    ``beta`` is the dimension of an orthogonal representation of G, supplied
    by the caller (see :func:`verify_orth_representation`).
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    alpha = independence_number(G)
    ratio = G.n_vertices / (alpha * beta)
    return AdvantageRatio(ratio, alpha, beta, ratio > 1)


def hadamard_degree(d: int) -> int:
    return comb(d, d // 2)


def graph_to_json(G: Graph) -> str:
    return json.dumps(
        {"n": G.n_vertices, "edges": [[u + 1, v + 1] for u, v in sorted(G.edges)]}
    )


def graph_from_json(text: str, label: str = "") -> Graph:
    doc = json.loads(text)
    n = doc["n"]
    edges = []
    for u, v in doc["edges"]:
        if not (1 <= u <= n and 1 <= v <= n):
            raise SizeMismatch(f"edge {(u, v)} out of range for n={n}")
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges, label=label)

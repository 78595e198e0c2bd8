"""One-way communication tasks as normalized coefficient tensors.

A task assigns a weight ``c[x, y, z] >= 0`` to every (sender input, receiver
input, output) triple; the weights sum to one so that the success metric

    S = sum_{x,y,z} c[x, y, z] p(z | x, y)

lies in [0, 1]. All indices are 0-based internally; the JSON format uses
1-based indices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np

from .errors import (
    IsolatedVertex,
    NegativeCoefficient,
    NotNormalized,
    Overflow,
    ShapeMismatch,
)

if TYPE_CHECKING:
    from .graphs import Graph

NORM_TOL = 1e-9
BEHAVIOR_TOL = 1e-9
RAC_INPUT_CAP = 10**6


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TaskSpec:
    N: int
    M: int
    D: int
    prior: np.ndarray
    coeffs: np.ndarray
    label: str = ""

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.N, self.M, self.D)


@dataclass(frozen=True)
class Behavior:
    """Conditional distribution ``probs[x, y, z] = p(z | x, y)``."""

    probs: np.ndarray = field()

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 3:
            raise ShapeMismatch(f"behavior must be 3-dimensional, got shape {p.shape}")
        if np.any(p < -BEHAVIOR_TOL):
            raise ValueError("behavior has negative probabilities")
        if not np.allclose(p.sum(axis=2), 1.0, atol=BEHAVIOR_TOL, rtol=0):
            raise ValueError("behavior slices over z must sum to 1")
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, N: int, M: int, D: int) -> "Behavior":
        return cls(np.full((N, M, D), 1.0 / D))


def make_task(
    N: int,
    M: int,
    D: int,
    coeffs,
    *,
    renormalize: bool = False,
    label: str = "",
    prior=None,
) -> TaskSpec:
    """Validate a coefficient tensor and wrap it as a :class:`TaskSpec`.

    The prior defaults to uniform. With ``renormalize=True`` an unnormalized
    tensor is scaled to unit mass; otherwise a total deviating from 1 by more
    than 1e-9 raises :class:`NotNormalized`.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (N, M, D):
        raise ShapeMismatch(f"coeffs shape {c.shape} != {(N, M, D)}")
    if np.any(c < 0):
        raise NegativeCoefficient("task coefficients must be nonnegative")
    total = c.sum()
    if renormalize:
        if total <= 0:
            raise NotNormalized("cannot renormalize an all-zero tensor")
        c = c / total
    elif abs(total - 1.0) > NORM_TOL:
        raise NotNormalized(f"coefficients sum to {total!r}, expected 1")

    if prior is None:
        prior = np.full(N, 1.0 / N)
    prior = np.asarray(prior, dtype=float)
    if prior.shape != (N,):
        raise ShapeMismatch(f"prior shape {prior.shape} != {(N,)}")
    if np.any(prior < 0) or abs(prior.sum() - 1.0) > 1e-12:
        raise NotNormalized("prior must be a probability vector")
    return TaskSpec(N, M, D, _frozen(prior), _frozen(c), label)


def rac_digits(x: int, n: int, d: int) -> tuple[int, ...]:
    """Big-endian base-``d`` digits of input index ``x`` (length ``n``)."""
    out = []
    for _ in range(n):
        out.append(x % d)
        x //= d
    return tuple(reversed(out))


def rac_task(n: int, d: int) -> TaskSpec:
    """(n, d) random access code: guess the y-th dit of an n-dit string."""
    if n < 1 or d < 2:
        raise ValueError("rac_task needs n >= 1 and d >= 2")
    if d**n > RAC_INPUT_CAP:
        raise Overflow(f"d^n = {d}^{n} exceeds the cap of {RAC_INPUT_CAP} inputs")
    N = d**n
    c = np.zeros((N, n, d))
    w = 1.0 / (n * N)
    for x in range(N):
        for y, digit in enumerate(rac_digits(x, n, d)):
            c[x, y, digit] = w
    return make_task(N, n, d, c, label=f"rac(n={n},d={d})")


def graph_equality_task(G: "Graph") -> TaskSpec:
    """Promise task on a graph: output 0 if x == y, 1 if x is adjacent to y."""
    N = G.n_vertices
    deg = G.degrees
    if np.any(deg == 0):
        iso = [int(v) + 1 for v in np.flatnonzero(deg == 0)]
        raise IsolatedVertex(f"vertices {iso} have no neighbours")
    w = 1.0 / (deg.sum() + N)
    c = np.zeros((N, N, 2))
    idx = np.arange(N)
    c[idx, idx, 0] = w
    c[:, :, 1] = np.where(G.adjacency, w, 0.0)
    label = f"graph-equality({G.label})" if G.label else "graph-equality"
    return make_task(N, N, 2, c, label=label)


def pair_index(N: int) -> list[tuple[int, int]]:
    """Receiver inputs of the pair task: unordered pairs, lexicographic."""
    return list(combinations(range(N), 2))


def pair_distinguishability_task(N: int) -> TaskSpec:
    """Given a pair containing x, the receiver must name x."""
    if N < 2:
        raise ValueError("pair task needs N >= 2")
    pairs = pair_index(N)
    c = np.zeros((N, len(pairs), N))
    w = 1.0 / (N * (N - 1))
    for y, (a, b) in enumerate(pairs):
        c[a, y, a] = w
        c[b, y, b] = w
    return make_task(N, len(pairs), N, c, label=f"pair-distinguishability(N={N})")


def evaluate_success(task: TaskSpec, behavior: Behavior | np.ndarray) -> float:
    probs = behavior.probs if isinstance(behavior, Behavior) else np.asarray(behavior)
    if probs.shape != task.shape:
        raise ShapeMismatch(f"behavior shape {probs.shape} != task shape {task.shape}")
    return float(np.sum(task.coeffs * probs))


def task_to_json(task: TaskSpec) -> str:
    entries = [
        [int(x) + 1, int(y) + 1, int(z) + 1, float(task.coeffs[x, y, z])]
        for x, y, z in zip(*np.nonzero(task.coeffs))
    ]
    doc = {
        "label": task.label,
        "N": task.N,
        "M": task.M,
        "D": task.D,
        "prior": [float(p) for p in task.prior],
        "coeffs": entries,
    }
    return json.dumps(doc)


def task_from_json(text: str) -> TaskSpec:
    doc = json.loads(text)
    N, M, D = doc["N"], doc["M"], doc["D"]
    c = np.zeros((N, M, D))
    for x, y, z, v in doc["coeffs"]:
        if not (1 <= x <= N and 1 <= y <= M and 1 <= z <= D):
            raise ShapeMismatch(f"entry index {(x, y, z)} out of range")
        c[x - 1, y - 1, z - 1] = v
    return make_task(N, M, D, c, label=doc.get("label", ""), prior=doc.get("prior"))

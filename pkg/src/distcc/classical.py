"""Classical one-way protocols: distinguishability, optimal decoding and the LP frontier.

The frontier LP uses one message per deterministic decoding function
``y -> z``. Merging all messages that share a decoding leaves the success
unchanged and can only lower the distinguishability (a max of a sum is at
most the sum of the maxes), so ``D**M`` messages are always enough.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import ceil, floor

import cvxpy as cp
import numpy as np

from .errors import Infeasible, Overflow, ShapeMismatch, UnsupportedFamily
from .graphs import Graph, independence_number
from .sdp.solver import LP_SOLVER, ConicProblem
from .tasks import TaskSpec

STOCHASTIC_TOL = 1e-12
MESSAGE_CAP = 10**5
BRUTE_FORCE_CAP = 10**6


@dataclass(frozen=True)
class Encoding:
    """Column-stochastic matrix ``probs[m, x] = p_e(m | x)``."""

    probs: np.ndarray

    def __post_init__(self):
        P = np.array(self.probs, dtype=float, copy=True)
        if P.ndim != 2:
            raise ShapeMismatch(f"encoding must be a matrix, got shape {P.shape}")
        if np.any(P < 0):
            raise ValueError("encoding probabilities must be nonnegative")
        if not np.allclose(P.sum(axis=0), 1.0, atol=STOCHASTIC_TOL, rtol=0):
            raise ValueError("each input's message distribution must sum to 1")
        P.setflags(write=False)
        object.__setattr__(self, "probs", P)

    @property
    def n_messages(self) -> int:
        return self.probs.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def deterministic(cls, assignment, n_messages: int | None = None) -> "Encoding":
        """Encoding sending input ``x`` to message ``assignment[x]``."""
        a = np.asarray(assignment, dtype=int)
        K = int(a.max()) + 1 if n_messages is None else n_messages
        P = np.zeros((K, a.size))
        P[a, np.arange(a.size)] = 1.0
        return cls(P)

    @classmethod
    def identity(cls, N: int) -> "Encoding":
        return cls(np.eye(N))

    @classmethod
    def constant(cls, N: int) -> "Encoding":
        return cls(np.ones((1, N)))


@dataclass(frozen=True)
class FrontierPoint:
    dist_cap: float
    best_success: float
    encoding: Encoding
    decoding: np.ndarray  # decoding[m, y] = z
    status: str = "optimal"


def _uniform(N: int) -> np.ndarray:
    return np.full(N, 1.0 / N)


def classical_distinguishability(enc: Encoding, prior=None) -> float:
    prior = _uniform(enc.n_inputs) if prior is None else np.asarray(prior, dtype=float)
    if prior.shape != (enc.n_inputs,):
        raise ShapeMismatch(f"prior shape {prior.shape} does not match {enc.n_inputs} inputs")
    return float(np.sum(np.max(enc.probs * prior[None, :], axis=1)))


def classical_success_given_encoding(task: TaskSpec, enc: Encoding) -> tuple[float, np.ndarray]:
    """Best success for a fixed encoding and the argmax decoding table ``[m, y] -> z``.

    Ties between outputs go to the smallest ``z``.
    """
    if enc.n_inputs != task.N:
        raise ShapeMismatch(f"encoding has {enc.n_inputs} inputs, task has N={task.N}")
    # weight[m, y, z] = sum_x c[x, y, z] p_e(m|x)
    weight = np.einsum("xyz,mx->myz", task.coeffs, enc.probs)
    decoding = np.argmax(weight, axis=2)
    return float(weight.max(axis=2).sum()), decoding


def canonical_message_count(task: TaskSpec) -> int:
    count = task.D**task.M
    if count > MESSAGE_CAP:
        raise Overflow(f"D^M = {task.D}^{task.M} exceeds the message cap {MESSAGE_CAP}")
    return count


def deterministic_decodings(task: TaskSpec) -> np.ndarray:
    """All decoding functions as rows ``dec[m, y]``, lexicographic order."""
    canonical_message_count(task)
    return np.array(list(product(range(task.D), repeat=task.M)), dtype=int).reshape(-1, task.M)


def _decoding_gains(task: TaskSpec, dec: np.ndarray) -> np.ndarray:
    """gain[m, x] = sum_y c[x, y, dec[m, y]]."""
    ys = np.arange(task.M)
    return task.coeffs[:, ys[None, :], dec].sum(axis=2).T


class _FrontierLP:
    def __init__(self, task: TaskSpec):
        self.task = task
        self.dec = deterministic_decodings(task)
        self.gain = _decoding_gains(task, self.dec)
        K, N = self.gain.shape
        self.lp = ConicProblem(LP_SOLVER)
        self.P = self.lp.real((K, N), nonneg=True)
        self.t = self.lp.real(K, nonneg=True)
        weighted = cp.multiply(self.P, np.tile(task.prior, (K, 1)))
        self.lp.add(
            cp.sum(self.P, axis=0) == 1,
            weighted <= cp.reshape(self.t, (K, 1), order="C") @ np.ones((1, N)),
        )
        self.success = cp.sum(cp.multiply(self.P, self.gain))
        self.dist = cp.sum(self.t)

    def witness(self, status: str, cap: float, success: float) -> FrontierPoint:
        P = np.clip(self.P.value, 0.0, None)
        keep = P.max(axis=1) > 1e-12
        P = P[keep]
        P /= P.sum(axis=0, keepdims=True)
        return FrontierPoint(cap, success, Encoding(P), self.dec[keep].copy(), status)


def classical_frontier(task: TaskSpec, p: float) -> FrontierPoint:
    """Maximum classical success subject to distinguishability at most ``p``."""
    floor_p = float(task.prior.max())
    if p < floor_p - 1e-12:
        raise Infeasible(f"distinguishability cap {p} is below the minimum {floor_p}")
    lp = _FrontierLP(task)
    lp.lp.add(lp.dist <= p)
    lp.lp.maximize(lp.success)
    res = lp.lp.solve().require()
    return lp.witness(res.status, p, res.value)


def classical_min_distinguishability(task: TaskSpec, S: float) -> FrontierPoint:
    """Minimum classical distinguishability needed to reach success ``S``."""
    lp = _FrontierLP(task)
    lp.lp.add(lp.success >= S)
    lp.lp.minimize(lp.dist)
    res = lp.lp.solve().require()
    return lp.witness(res.status, res.value, float(lp.success.value))


def max_classical_success(task: TaskSpec) -> float:
    """Best success with unconstrained communication: sum over (x, y) of max_z c."""
    return float(task.coeffs.max(axis=2).sum())


# closed-form lower bounds on D_C ---------------------------------------------


def rac_bound(n: int, S: float) -> float:
    return max(n * S + 1 - n, 0.0)


def graph_bound(G: Graph, S: float, alpha: int | None = None) -> float:
    N = G.n_vertices
    if alpha is None:
        alpha = independence_number(G)
    total = float(G.degrees.sum()) + N
    return max(0.0, (total * (S - 1) + N) / (N * alpha))


def pairdist_bound(N: int, S: float) -> float:
    if N < 2:
        raise ValueError("pair task needs N >= 2")
    return max(0.0, (N - 1) * (S - 1) + 1)


# dimension-bounded classical success ------------------------------------------


def dim_bounded_success(family: str, **params) -> float:
    """Best classical success with ``d_C``-level messages for three task families.

    ``pairdist`` (N, d_C=2): an optimal two-message encoding splits the inputs
    into halves, so S = 1/2 + floor(N/2) ceil(N/2) / (N (N - 1)).
    ``cycle`` (N odd, d_C): 1 - 2/(3N) for two messages; three messages colour
    the cycle properly and reach 1.
    ``rac2`` (d, d_C): the upper bound (1 + d_C / d^2) / 2, capped at 1.
    """
    if family == "pairdist":
        N, dC = params["N"], params.get("d_C", 2)
        if dC != 2 or N < 2:
            raise UnsupportedFamily("pairdist closed form needs d_C = 2 and N >= 2")
        return 0.5 + floor(N / 2) * ceil(N / 2) / (N * (N - 1))
    if family == "cycle":
        N, dC = params["N"], params.get("d_C", 2)
        if N < 3 or N % 2 == 0 or dC < 2:
            raise UnsupportedFamily("cycle closed form needs odd N >= 3 and d_C >= 2")
        return 1 - 2 / (3 * N) if dC == 2 else 1.0
    if family == "rac2":
        d, dC = params["d"], params["d_C"]
        return min(1.0, 0.5 * (1 + dC / d**2))
    raise UnsupportedFamily(f"unknown family {family!r}")


def brute_force_dim_bounded_success(task: TaskSpec, d_C: int) -> tuple[float, Encoding]:
    """Exhaustive search over deterministic encodings into ``d_C`` messages.

    Deterministic encodings suffice: for a fixed decoding the success is
    linear in the encoding, so the maximum sits at a vertex.
    """
    if d_C**task.N > BRUTE_FORCE_CAP:
        raise Overflow(f"{d_C}^{task.N} encodings exceed the brute-force cap")
    best, best_assign = -1.0, None
    for assign in product(range(d_C), repeat=task.N):
        if assign[0] != 0:
            break  # message relabelling symmetry
        value, _ = classical_success_given_encoding(task, Encoding.deterministic(assign, d_C))
        if value > best + 1e-15:
            best, best_assign = value, assign
    return best, Encoding.deterministic(best_assign, d_C)

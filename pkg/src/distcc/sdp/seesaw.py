"""Dimension-bounded see-saw: alternate exact SDPs over states and measurements.

The distinguishability cap enters through an auxiliary Hermitian operator
Theta with Theta >= rho_x for all x and tr(Theta)/N <= p. Since
sum_x tr(rho_x E_x) <= tr(Theta sum_x E_x) = tr(Theta) for any POVM {E_x},
every state step output has distinguishability at most p.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import cvxpy as cp
import numpy as np

from ..errors import Infeasible
from ..tasks import TaskSpec
from .solver import ConicProblem, real_inner_param, set_hermitian_param

log = logging.getLogger(__name__)

DEFAULT_SEEDS = 10
DEFAULT_MAX_ITERS = 200
DEFAULT_TOL = 1e-7


@dataclass
class SeesawResult:
    success: float
    strategy: object  # QuantumStrategy
    status: str  # "converged" | "max_iters" | "no_improvement"
    seed_index: int
    history: list[float] = field(default_factory=list)
    theta_trace: float = float("nan")
    seed_values: list[float] = field(default_factory=list)


def random_povm(rng: np.random.Generator, D: int, d: int) -> np.ndarray:
    """Random full-rank POVM with D outcomes on C^d."""
    G = rng.normal(size=(D, d, d)) + 1j * rng.normal(size=(D, d, d))
    A = G @ G.conj().transpose(0, 2, 1)
    S = A.sum(axis=0)
    w, V = np.linalg.eigh(S)
    S_isqrt = V @ np.diag(w**-0.5) @ V.conj().T
    return np.array([S_isqrt @ Az @ S_isqrt for Az in A])


def haar_kets(rng: np.random.Generator, N: int, d: int) -> np.ndarray:
    v = rng.normal(size=(N, d)) + 1j * rng.normal(size=(N, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def clean_states(states: np.ndarray) -> np.ndarray:
    out = []
    for rho in states:
        rho = (rho + rho.conj().T) / 2
        w, V = np.linalg.eigh(rho)
        w = np.clip(w, 0, None)
        out.append((V * (w / w.sum())) @ V.conj().T)
    return np.array(out)


def clean_povm(povm: np.ndarray) -> np.ndarray:
    ops = []
    for E in povm:
        E = (E + E.conj().T) / 2
        w, V = np.linalg.eigh(E)
        ops.append((V * np.clip(w, 0, None)) @ V.conj().T)
    ops = np.array(ops)
    w, V = np.linalg.eigh(ops.sum(axis=0))
    S_isqrt = (V * w**-0.5) @ V.conj().T
    return np.array([S_isqrt @ E @ S_isqrt for E in ops])


class StateStep:
    """max sum_x tr(rho_x B_x) over states with the Theta cap, B_x = sum_{y,z} c M_{z|y}."""

    def __init__(self, task: TaskSpec, dim: int, p: float):
        self.task = task
        N = task.N
        self.prob = ConicProblem()
        self.rho = [self.prob.hermitian(dim) for _ in range(N)]
        self.theta = self.prob.hermitian(dim)
        self.Bre = [self.prob.parameter((dim, dim)) for _ in range(N)]
        self.Bim = [self.prob.parameter((dim, dim)) for _ in range(N)]
        for x in range(N):
            self.prob.psd(self.rho[x])
            self.prob.add(cp.real(cp.trace(self.rho[x])) == 1)
            self.prob.psd(self.theta - self.rho[x])
        self.prob.add(cp.real(cp.trace(self.theta)) <= N * p)
        self.prob.maximize(
            sum(real_inner_param(self.rho[x], self.Bre[x], self.Bim[x]) for x in range(N))
        )

    def solve(self, meas: np.ndarray):
        B = np.einsum("xyz,yzij->xij", self.task.coeffs, meas)
        for x in range(self.task.N):
            set_hermitian_param(self.Bre[x], self.Bim[x], B[x])
        res = self.prob.solve().require()
        states = np.array([r.value for r in self.rho])
        return res.value, states, float(np.trace(self.theta.value).real)


class MeasurementStep:
    """max sum_{y,z} tr(M_{z|y} A_{yz}) over POVMs, A_{yz} = sum_x c rho_x."""

    def __init__(self, task: TaskSpec, dim: int):
        self.task = task
        M, D = task.M, task.D
        self.prob = ConicProblem()
        self.E = [[self.prob.hermitian(dim) for _ in range(D)] for _ in range(M)]
        self.Are = [[self.prob.parameter((dim, dim)) for _ in range(D)] for _ in range(M)]
        self.Aim = [[self.prob.parameter((dim, dim)) for _ in range(D)] for _ in range(M)]
        for y in range(M):
            for z in range(D):
                self.prob.psd(self.E[y][z])
            self.prob.add(sum(self.E[y]) == np.eye(dim))
        self.prob.maximize(
            sum(
                real_inner_param(self.E[y][z], self.Are[y][z], self.Aim[y][z])
                for y in range(M)
                for z in range(D)
            )
        )

    def solve(self, states: np.ndarray):
        A = np.einsum("xyz,xij->yzij", self.task.coeffs, states)
        for y in range(self.task.M):
            for z in range(self.task.D):
                set_hermitian_param(self.Are[y][z], self.Aim[y][z], A[y, z])
        res = self.prob.solve().require()
        meas = np.array([[E.value for E in row] for row in self.E])
        return res.value, meas


def optimal_measurements(task: TaskSpec, states) -> np.ndarray:
    """Success-maximizing POVMs for fixed states, shape (M, D, d, d)."""
    states = np.asarray(getattr(states, "states", states), dtype=complex)
    _, meas = MeasurementStep(task, states.shape[1]).solve(states)
    return clean_povm_all(meas)


def optimal_states(task: TaskSpec, meas: np.ndarray, p: float):
    """Success-maximizing states for fixed POVMs under the distinguishability cap."""
    meas = np.asarray(meas, dtype=complex)
    value, states, _ = StateStep(task, meas.shape[2], p).solve(meas)
    return value, clean_states(states)


def clean_povm_all(meas: np.ndarray) -> np.ndarray:
    return np.array([clean_povm(povm) for povm in meas])


def seesaw_max_success(
    task: TaskSpec,
    dim: int,
    p: float,
    seeds: int = DEFAULT_SEEDS,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    rng_seed: int = 0,
) -> SeesawResult:
    """Best see-saw success over ``seeds`` random restarts (a lower bound on the quantum optimum).

    Assumes the uniform prior. Ties between restarts go to the lowest index.
    """
    from ..quantum import QuantumStrategy  # local import: quantum depends on this package

    if dim < 2:
        raise ValueError("dim must be >= 2")
    if p < 1.0 / task.N - 1e-12 or p > 1 + 1e-12:
        raise Infeasible(f"cap p={p} outside [1/N, 1]")
    state_step = StateStep(task, dim, p)
    meas_step = MeasurementStep(task, dim)

    best: SeesawResult | None = None
    seed_values = []
    for k in range(seeds):
        rng = np.random.default_rng([rng_seed, k])
        meas = random_povm_set(rng, task.M, task.D, dim)
        history: list[float] = []
        prev = -np.inf
        status = "max_iters"
        theta_tr = float("nan")
        for it in range(max_iters):
            v_states, states, theta_tr = state_step.solve(meas)
            v_meas, meas = meas_step.solve(states)
            history += [v_states, v_meas]
            if v_meas - prev < tol:
                status = "converged" if it > 1 else "no_improvement"
                break
            prev = v_meas
        strat = QuantumStrategy(clean_states(states), clean_povm_all(meas))
        value = float(np.sum(task.coeffs * strat.behavior()))
        seed_values.append(value)
        log.debug("seesaw seed %d: S=%.9f after %d iterations (%s)", k, value, it + 1, status)
        if best is None or value > best.success + 1e-12:
            best = SeesawResult(value, strat, status, k, history, theta_tr)
    best.seed_values = seed_values
    return best


def random_povm_set(rng: np.random.Generator, M: int, D: int, d: int) -> np.ndarray:
    return np.array([random_povm(rng, D, d) for _ in range(M)])

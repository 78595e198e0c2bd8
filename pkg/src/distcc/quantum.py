"""Quantum strategies, Born-rule evaluation and the explicit protocol constructors."""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatch,
    EvenN,
    InvalidMeasurement,
    InvalidState,
    OddDimension,
    ShapeMismatch,
    TooLarge,
)
from .graphs import Graph, hadamard_bits
from .sdp.solver import ConicProblem, SolveResult, real_inner
from .tasks import TaskSpec

HERM_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
HADAMARD_STRATEGY_CAP = 20


def _check_states(states: np.ndarray) -> None:
    if states.ndim != 3 or states.shape[1] != states.shape[2]:
        raise ShapeMismatch(f"states must have shape (N, d, d), got {states.shape}")
    for x, rho in enumerate(states):
        if np.max(np.abs(rho - rho.conj().T)) > HERM_TOL:
            raise InvalidState(f"state {x} is not Hermitian")
        if abs(np.trace(rho).real - 1) > TRACE_TOL:
            raise InvalidState(f"state {x} has trace {np.trace(rho).real!r}")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise InvalidState(f"state {x} is not positive semidefinite")


def _check_measurements(meas: np.ndarray) -> None:
    if meas.ndim != 4 or meas.shape[2] != meas.shape[3]:
        raise ShapeMismatch(f"measurements must have shape (M, D, d, d), got {meas.shape}")
    eye = np.eye(meas.shape[2])
    for y, povm in enumerate(meas):
        for z, E in enumerate(povm):
            if np.max(np.abs(E - E.conj().T)) > HERM_TOL:
                raise InvalidMeasurement(f"M[{z}|{y}] is not Hermitian")
            if np.linalg.eigvalsh(E).min() < -PSD_TOL:
                raise InvalidMeasurement(f"M[{z}|{y}] is not positive semidefinite")
        if np.max(np.abs(povm.sum(axis=0) - eye)) > COMPLETENESS_TOL:
            raise InvalidMeasurement(f"measurement {y} does not sum to the identity")


@dataclass(frozen=True)
class QuantumStrategy:
    states: np.ndarray  # (N, d, d)
    measurements: np.ndarray  # (M, D, d, d)

    def __post_init__(self):
        states = np.array(self.states, dtype=complex, copy=True)
        meas = np.array(self.measurements, dtype=complex, copy=True)
        _check_states(states)
        _check_measurements(meas)
        if states.shape[1] != meas.shape[2]:
            raise DimensionMismatch("states and measurements act on different dimensions")
        states.setflags(write=False)
        meas.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "measurements", meas)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.states.shape[0], self.measurements.shape[0], self.measurements.shape[1])

    def behavior(self) -> np.ndarray:
        """``p[x, y, z] = tr(rho_x M_{z|y})``."""
        return np.einsum("xij,yzji->xyz", self.states, self.measurements).real


def fix_phase(kets: np.ndarray) -> np.ndarray:
    """Rotate each ket so its first nonzero amplitude is real and positive."""
    kets = np.array(kets, dtype=complex, copy=True)
    for k in kets:
        nz = np.flatnonzero(np.abs(k) > 1e-12)
        if nz.size:
            a = k[nz[0]]
            k *= np.conj(a) / abs(a)
    return kets


@dataclass(frozen=True)
class PureStateFamily:
    kets: np.ndarray  # (N, d)

    def __post_init__(self):
        K = fix_phase(self.kets)
        if K.ndim != 2:
            raise ShapeMismatch(f"kets must have shape (N, d), got {K.shape}")
        if not np.allclose(np.linalg.norm(K, axis=1), 1.0, atol=1e-10, rtol=0):
            raise InvalidState("kets must be unit vectors")
        K.setflags(write=False)
        object.__setattr__(self, "kets", K)

    @property
    def dim(self) -> int:
        return self.kets.shape[1]

    def density_matrices(self) -> np.ndarray:
        return np.einsum("xi,xj->xij", self.kets, self.kets.conj())


def _as_states(states) -> np.ndarray:
    if isinstance(states, PureStateFamily):
        return states.density_matrices()
    if isinstance(states, QuantumStrategy):
        return states.states
    return np.asarray(states, dtype=complex)


def quantum_success(task: TaskSpec, strat: QuantumStrategy) -> float:
    if strat.shape != task.shape:
        raise ShapeMismatch(f"strategy shape {strat.shape} != task shape {task.shape}")
    return float(np.sum(task.coeffs * strat.behavior()))


def distinguishability_sdp(states, prior=None) -> tuple[float, np.ndarray, SolveResult]:
    """Optimal guessing probability of x, the optimal POVM and the solver report."""
    rho = _as_states(states)
    if rho.ndim != 3 or rho.shape[1] != rho.shape[2]:
        raise DimensionMismatch(f"states must share one dimension, got shape {rho.shape}")
    N, d = rho.shape[0], rho.shape[1]
    prior = np.full(N, 1.0 / N) if prior is None else np.asarray(prior, dtype=float)
    prob = ConicProblem()
    E = [prob.hermitian(d) for _ in range(N)]
    for Ex in E:
        prob.psd(Ex)
    prob.add(sum(E) == np.eye(d))
    prob.maximize(sum(prior[x] * real_inner(E[x], rho[x]) for x in range(N)))
    res = prob.solve().require()
    return res.value, np.array([Ex.value for Ex in E]), res


def quantum_distinguishability(states, prior=None) -> float:
    return distinguishability_sdp(states, prior)[0]


def trace_norm(A: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2)).sum())


def helstrom_pair_success(states) -> float:
    """Pair-task success with the optimal two-outcome measurement for every pair."""
    rho = _as_states(states)
    N = rho.shape[0]
    if N < 2:
        raise ValueError("need at least two states")
    if rho.ndim != 3 or rho.shape[1] != rho.shape[2]:
        raise DimensionMismatch(f"states must share one dimension, got shape {rho.shape}")
    total = sum(trace_norm(rho[a] - rho[b]) for a, b in combinations(range(N), 2))
    return 0.5 + total / (2 * N * (N - 1))


def projector(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


def fourier_basis(d: int) -> np.ndarray:
    """Rows f_k with amplitudes exp(2 pi i j k / d) / sqrt(d)."""
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def rac_mub_strategy(d: int) -> QuantumStrategy:
    """(2, d) RAC strategy measuring in the computational and Fourier bases."""
    if d < 2:
        raise ValueError("rac_mub_strategy needs d >= 2")
    e = np.eye(d, dtype=complex)
    f = fourier_basis(d)
    kets = []
    for x1 in range(d):
        for x2 in range(d):
            H = (projector(e[x1]) + projector(f[x2])) / 2
            _, vecs = np.linalg.eigh(H)
            kets.append(vecs[:, -1])
    states = PureStateFamily(np.array(kets)).density_matrices()
    meas = np.array([[projector(v) for v in e], [projector(v) for v in f]])
    return QuantumStrategy(states, meas)


def _real_ket(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def noisy_rac22_strategy(p: float) -> QuantumStrategy:
    """Depolarized qubit (2, 2) RAC strategy.

    The first bit is read in the |+>, |-> basis and the second in the
    computational basis; that is the assignment under which these four states
    decode their own bits.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    angles = {(0, 0): np.pi / 8, (0, 1): 3 * np.pi / 8, (1, 0): 7 * np.pi / 8, (1, 1): 5 * np.pi / 8}
    states = np.array(
        [p * projector(_real_ket(angles[x1, x2])) + (1 - p) * np.eye(2) / 2
         for x1 in (0, 1) for x2 in (0, 1)]
    )
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    meas = np.array(
        [[projector(plus), projector(minus)],
         [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]]
    )
    return QuantumStrategy(states, meas)


def graph_measurements(kets: np.ndarray) -> np.ndarray:
    """Binary measurements {|psi_y><psi_y|, 1 - |psi_y><psi_y|} for every y."""
    d = kets.shape[1]
    return np.array([[projector(k), np.eye(d) - projector(k)] for k in kets])


def graph_strategy(family: PureStateFamily) -> QuantumStrategy:
    return QuantumStrategy(family.density_matrices(), graph_measurements(family.kets))


def graph_success_from_overlaps(G: Graph, family: PureStateFamily) -> float:
    """1 - w * sum_y sum_{x adjacent y} |<psi_x|psi_y>|^2, from the Gram matrix."""
    gram = np.abs(family.kets.conj() @ family.kets.T) ** 2
    w = 1.0 / (G.degrees.sum() + G.n_vertices)
    return float(1 - w * gram[G.adjacency].sum())


def ngon_kets(N: int) -> PureStateFamily:
    if N < 3:
        raise ValueError("ngon needs N >= 3")
    if N % 2 == 0:
        raise EvenN(f"the N-gon construction needs odd N, got {N}")
    beta = (N - 1) * np.pi / N
    return PureStateFamily(np.array([_real_ket(i * beta / 2) for i in range(N)]))


def ngon_strategy(N: int) -> QuantumStrategy:
    return graph_strategy(ngon_kets(N))


def hadamard_kets(d: int) -> PureStateFamily:
    """The 2**d sign vectors (-1)^x / sqrt(d), vertices ordered by integer value."""
    if d % 2:
        raise OddDimension(f"Hadamard strategy needs even d, got {d}")
    if d > HADAMARD_STRATEGY_CAP:
        raise TooLarge(f"explicit Hadamard strategy capped at d <= {HADAMARD_STRATEGY_CAP}")
    return PureStateFamily((1 - 2 * hadamard_bits(d)) / np.sqrt(d))


def hadamard_strategy(d: int) -> QuantumStrategy:
    return graph_strategy(hadamard_kets(d))


def pairdist_states(N: int, dim: int = 2) -> PureStateFamily:
    """Qubit kets cos(x pi/N)|0> + sin(x pi/N)|1>, x = 1..N, optionally padded to ``dim``."""
    if N < 2:
        raise ValueError("pairdist_states needs N >= 2")
    if dim < 2:
        raise ValueError("dim must be >= 2")
    kets = np.zeros((N, dim), dtype=complex)
    for i, x in enumerate(range(1, N + 1)):
        kets[i, :2] = _real_ket(x * np.pi / N)
    return PureStateFamily(kets)


def maximally_mixed_strategy(N: int, M: int, D: int, d: int) -> QuantumStrategy:
    states = np.repeat((np.eye(d) / d)[None], N, axis=0)
    meas = np.repeat(np.repeat((np.eye(d) / D)[None, None], D, axis=1), M, axis=0)
    return QuantumStrategy(states, meas)


# serialization ------------------------------------------------------------------


def _interleave(A: np.ndarray) -> list[float]:
    flat = np.asarray(A, dtype=complex).ravel()
    return np.column_stack([flat.real, flat.imag]).ravel().tolist()


def _deinterleave(values, d: int) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.size != 2 * d * d:
        raise ShapeMismatch(f"expected {2 * d * d} numbers, got {v.size}")
    return (v[0::2] + 1j * v[1::2]).reshape(d, d)


def strategy_to_json(strat: QuantumStrategy) -> str:
    N, M, D = strat.shape
    return json.dumps({
        "dim": strat.dim,
        "N": N,
        "M": M,
        "D": D,
        "states": [_interleave(r) for r in strat.states],
        "measurements": [[_interleave(E) for E in povm] for povm in strat.measurements],
    })


def strategy_from_json(text: str) -> QuantumStrategy:
    doc = json.loads(text)
    d, N, M, D = doc["dim"], doc["N"], doc["M"], doc["D"]
    states = np.array([_deinterleave(s, d) for s in doc["states"]])
    meas = np.array([[_deinterleave(E, d) for E in povm] for povm in doc["measurements"]])
    if states.shape != (N, d, d) or meas.shape != (M, D, d, d):
        raise ShapeMismatch("strategy header does not match the matrices")
    return QuantumStrategy(states, meas)

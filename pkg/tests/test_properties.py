"""Randomized property suites, at least 100 instances each."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from distcc.classical import (
    Encoding,
    classical_distinguishability,
    classical_frontier,
    classical_success_given_encoding,
)
from distcc.errors import NotNormalized
from distcc.quantum import quantum_distinguishability
from distcc.sdp.seesaw import optimal_measurements, seesaw_max_success
from distcc.tasks import Behavior, evaluate_success, make_task

from conftest import random_density, random_task

N_INSTANCES = 100

shapes = st.tuples(st.integers(1, 4), st.integers(1, 3), st.integers(2, 4))


@st.composite
def tensors(draw):
    N, M, D = draw(shapes)
    c = draw(arrays(float, (N, M, D), elements=st.floats(0, 10, allow_subnormal=False)))
    return N, M, D, c


@st.composite
def behaviors(draw, shape):
    raw = draw(arrays(float, shape, elements=st.floats(0.01, 1)))
    return raw / raw.sum(axis=2, keepdims=True)


@given(tensors())
def test_task_normalization(data):
    N, M, D, c = data
    if c.sum() <= 0:
        return
    t = make_task(N, M, D, c, renormalize=True)
    assert t.coeffs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(t.coeffs >= 0)
    if abs(c.sum() - 1) > 1e-6:
        with pytest.raises(NotNormalized):
            make_task(N, M, D, c)
    # any valid behavior scores within [0, 1]
    S = evaluate_success(t, Behavior.uniform(N, M, D))
    assert -1e-12 <= S <= 1 + 1e-12


@given(st.data())
def test_behavior_linearity(data):
    N, M, D = data.draw(shapes)
    c = data.draw(arrays(float, (N, M, D), elements=st.floats(0.01, 1)))
    t = make_task(N, M, D, c, renormalize=True)
    b1 = data.draw(behaviors((N, M, D)))
    b2 = data.draw(behaviors((N, M, D)))
    lam = data.draw(st.floats(0, 1))
    mixed = Behavior(lam * b1 + (1 - lam) * b2)
    lhs = evaluate_success(t, mixed)
    rhs = lam * evaluate_success(t, b1) + (1 - lam) * evaluate_success(t, b2)
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert 0 <= lhs <= 1 + 1e-12


def test_encoding_stochasticity():
    for seed in range(N_INSTANCES):
        rng = np.random.default_rng(seed)
        t = random_task(rng)
        p = float(rng.uniform(1 / t.N, 1))
        pt = classical_frontier(t, p)
        P = pt.encoding.probs
        assert np.all(P >= 0)
        assert np.allclose(P.sum(axis=0), 1, atol=1e-12)
        assert classical_distinguishability(pt.encoding) <= p + 1e-7
        value, _ = classical_success_given_encoding(t, pt.encoding)
        assert value >= pt.best_success - 1e-7


def test_povm_completeness():
    for seed in range(N_INSTANCES):
        rng = np.random.default_rng(1000 + seed)
        d = int(rng.integers(2, 4))
        t = random_task(rng)
        states = np.array([random_density(rng, d, rank=int(rng.integers(1, d + 1))) for _ in range(t.N)])
        meas = optimal_measurements(t, states)
        assert np.allclose(meas.sum(axis=1), np.eye(d), atol=1e-9)
        assert min(np.linalg.eigvalsh(E).min() for povm in meas for E in povm) >= -1e-9


def test_observation1_cap():
    for seed in range(N_INSTANCES):
        rng = np.random.default_rng(2000 + seed)
        N = int(rng.integers(2, 6))
        d = int(rng.integers(1, N + 1))
        states = np.array([random_density(rng, d, rank=int(rng.integers(1, d + 1))) for _ in range(N)])
        assert quantum_distinguishability(states) <= d / N + 1e-7


def test_frontier_monotone_and_concave():
    for seed in range(N_INSTANCES):
        rng = np.random.default_rng(3000 + seed)
        t = random_task(rng)
        lo = 1 / t.N
        p1, p3 = np.sort(rng.uniform(lo, 1, size=2))
        lam = rng.uniform()
        p2 = lam * p1 + (1 - lam) * p3
        f1, f2, f3 = (classical_frontier(t, p).best_success for p in (p1, p2, p3))
        assert f1 <= f2 + 1e-7 and f2 <= f3 + 1e-7
        assert f2 >= lam * f1 + (1 - lam) * f3 - 1e-7


def test_seesaw_iterates_monotone():
    for seed in range(N_INSTANCES):
        rng = np.random.default_rng(4000 + seed)
        t = random_task(rng, N=int(rng.integers(2, 4)), M=int(rng.integers(1, 3)), D=2)
        p = float(rng.uniform(1 / t.N, 1))
        res = seesaw_max_success(t, 2, p, seeds=1, max_iters=4, rng_seed=seed)
        h = np.array(res.history)
        assert np.all(np.diff(h) >= -1e-6), h

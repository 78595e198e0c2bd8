from itertools import product

import numpy as np
import pytest
from scipy.optimize import linprog

from distcc.classical import (
    Encoding,
    brute_force_dim_bounded_success,
    canonical_message_count,
    classical_distinguishability,
    classical_frontier,
    classical_min_distinguishability,
    classical_success_given_encoding,
    dim_bounded_success,
    graph_bound,
    max_classical_success,
    pairdist_bound,
    rac_bound,
)
from distcc.errors import Infeasible, Overflow, UnsupportedFamily
from distcc.graphs import cycle_graph, small_graph_catalog
from distcc.tasks import graph_equality_task, make_task, pair_distinguishability_task, rac_task

from conftest import random_task


def linprog_frontier(task, p):
    """Independent frontier oracle written directly against scipy.optimize.linprog."""
    N, M, D = task.shape
    decs = list(product(range(D), repeat=M))
    K = len(decs)
    gain = np.array([[sum(task.coeffs[x, y, dec[y]] for y in range(M)) for x in range(N)] for dec in decs])
    nv = K * N + K
    c = np.zeros(nv)
    c[: K * N] = -gain.ravel()
    A_eq = np.zeros((N, nv))
    for x in range(N):
        A_eq[x, [m * N + x for m in range(K)]] = 1
    A_ub, b_ub = [], []
    for m in range(K):
        for x in range(N):
            row = np.zeros(nv)
            row[m * N + x] = task.prior[x]
            row[K * N + m] = -1
            A_ub.append(row)
            b_ub.append(0)
    row = np.zeros(nv)
    row[K * N:] = 1
    A_ub.append(row)
    b_ub.append(p)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=np.ones(N), bounds=(0, None))
    return -res.fun


def test_encoding_validation():
    with pytest.raises(ValueError):
        Encoding(np.array([[0.5, 1.0], [0.4, 0.0]]))
    with pytest.raises(ValueError):
        Encoding(np.array([[1.2, 1.0], [-0.2, 0.0]]))
    e = Encoding.deterministic([0, 1, 1])
    assert e.n_messages == 2 and e.n_inputs == 3


def test_distinguishability_extremes():
    assert classical_distinguishability(Encoding.identity(4)) == pytest.approx(1.0)
    assert classical_distinguishability(Encoding.constant(4)) == pytest.approx(0.25)
    e = Encoding.deterministic([0, 0, 1, 1])
    assert classical_distinguishability(e) == pytest.approx(0.5)


def test_success_given_encoding_rac22():
    t = rac_task(2, 2)
    value, dec = classical_success_given_encoding(t, Encoding.deterministic([0, 0, 1, 1]))
    assert value == pytest.approx(0.75)  # m = first bit
    assert dec.shape == (2, 2)
    assert dec[1, 0] == 1
    value, _ = classical_success_given_encoding(t, Encoding.identity(4))
    assert value == pytest.approx(1.0)


def test_success_matches_min_form_on_binary_tasks(rng):
    # For D = 2: S = sum c - sum_{m,y} min_z sum_x c(x,y,z) p(m|x)
    for _ in range(100):
        t = random_task(rng, D=2)
        P = rng.random((int(rng.integers(1, 5)), t.N))
        enc = Encoding(P / P.sum(axis=0))
        weight = np.einsum("xyz,mx->myz", t.coeffs, enc.probs)
        oracle = 1.0 - weight.min(axis=2).sum()
        assert classical_success_given_encoding(t, enc)[0] == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("p, expected", [(1.0, 1.0), (0.5, 0.75), (0.25, 0.5)])
def test_frontier_rac22(p, expected):
    pt = classical_frontier(rac_task(2, 2), p)
    assert pt.best_success == pytest.approx(expected, abs=1e-7)
    t = rac_task(2, 2)
    assert classical_distinguishability(pt.encoding) <= p + 1e-7
    value, _ = classical_success_given_encoding(t, pt.encoding)
    assert value == pytest.approx(expected, abs=1e-7)


def test_frontier_below_floor_is_infeasible():
    with pytest.raises(Infeasible):
        classical_frontier(rac_task(2, 2), 0.2)


def test_frontier_against_linprog_oracle(rng):
    for _ in range(20):
        t = random_task(rng)
        p = float(rng.uniform(1 / t.N, 1))
        assert classical_frontier(t, p).best_success == pytest.approx(linprog_frontier(t, p), abs=1e-7)


def test_min_distinguishability_rac22():
    assert classical_min_distinguishability(rac_task(2, 2), 0.75).dist_cap == pytest.approx(0.5, abs=1e-7)


def test_min_distinguishability_pentagon_perfect():
    # Mixing the five 2-vertex independent sets with weight 1/2 each gives
    # D = 5 * (1/2) / 5 = 1/2, which meets the bound 1/alpha at S = 1.
    pt = classical_min_distinguishability(graph_equality_task(cycle_graph(5)), 1.0)
    assert pt.dist_cap == pytest.approx(1 / 2, abs=1e-7)
    assert graph_bound(cycle_graph(5), 1.0) == pytest.approx(1 / 2)


def test_frontier_perfect_at_one():
    for t in [rac_task(2, 3), pair_distinguishability_task(4), graph_equality_task(cycle_graph(5))]:
        assert classical_frontier(t, 1.0).best_success == pytest.approx(1.0, abs=1e-7)
        assert max_classical_success(t) == pytest.approx(1.0)


def test_message_cap():
    t = make_task(2, 17, 2, np.ones((2, 17, 2)), renormalize=True)
    with pytest.raises(Overflow):
        canonical_message_count(t)


def test_closed_form_bounds():
    assert rac_bound(2, 0.75) == pytest.approx(0.5)
    assert rac_bound(3, 2 / 3) == 0.0
    assert graph_bound(cycle_graph(5), 1 - (2 / 3) * np.sin(np.pi / 10) ** 2) == pytest.approx(0.40451, abs=1e-5)
    assert pairdist_bound(3, 0.9330127) == pytest.approx(0.8660254, abs=1e-6)


@pytest.mark.parametrize(
    "task, bound, step",
    [
        (rac_task(2, 2), lambda S: rac_bound(2, S), 0.01),
        (rac_task(2, 3), lambda S: rac_bound(2, S), 0.01),
        (graph_equality_task(cycle_graph(5)), lambda S: graph_bound(cycle_graph(5), S), 0.01),
        (pair_distinguishability_task(3), lambda S: pairdist_bound(3, S), 0.01),
        # 4^6 candidate messages per LP, so a coarser grid
        (pair_distinguishability_task(4), lambda S: pairdist_bound(4, S), 0.125),
    ],
)
def test_frontier_dominates_theorem_bounds(task, bound, step):
    for S in np.round(np.arange(0.5, 1.0001, step), 10):
        p = classical_min_distinguishability(task, S).dist_cap
        assert p >= bound(S) - 1e-6


def test_dim_bounded_pairdist_matches_brute_force():
    for N in range(2, 8):
        brute, _ = brute_force_dim_bounded_success(pair_distinguishability_task(N), 2)
        assert dim_bounded_success("pairdist", N=N) == pytest.approx(brute, abs=1e-12)


def test_dim_bounded_cycle_matches_brute_force():
    for N in (5, 7, 9):
        task = graph_equality_task(cycle_graph(N))
        assert dim_bounded_success("cycle", N=N, d_C=2) == pytest.approx(
            brute_force_dim_bounded_success(task, 2)[0], abs=1e-12)
        assert dim_bounded_success("cycle", N=N, d_C=3) == pytest.approx(
            brute_force_dim_bounded_success(task, 3)[0], abs=1e-12)


def test_dim_bounded_rac2():
    assert dim_bounded_success("rac2", d=2, d_C=2) == pytest.approx(0.75)
    assert brute_force_dim_bounded_success(rac_task(2, 2), 2)[0] == pytest.approx(0.75)
    assert dim_bounded_success("rac2", d=3, d_C=9) == 1.0


def test_dim_bounded_errors():
    with pytest.raises(UnsupportedFamily):
        dim_bounded_success("pairdist", N=4, d_C=3)
    with pytest.raises(UnsupportedFamily):
        dim_bounded_success("cycle", N=6)
    with pytest.raises(UnsupportedFamily):
        dim_bounded_success("nope")


def test_catalog_graphs_perfect_classical():
    for G in small_graph_catalog():
        assert classical_frontier(graph_equality_task(G), 1.0).best_success == pytest.approx(1.0, abs=1e-7)

"""Reproducible sweeps over the task families, emitted as CSV tables with run manifests.

Every run returns a :class:`RunTable`. Rows carry a ``status`` column: a
failure at one grid point is recorded there and the run moves on. Tables are
written in grid order whatever order the workers finish in, and floats are
printed with a fixed format, so reruns with the same arguments give identical
CSV bytes.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .classical import (
    classical_min_distinguishability,
    dim_bounded_success,
    graph_bound,
    pairdist_bound,
    rac_bound,
)
from .errors import DistccError
from .graphs import hadamard_graph, independence_number, small_graph_catalog
from .quantum import (
    graph_success_from_overlaps,
    hadamard_kets,
    helstrom_pair_success,
    ngon_strategy,
    noisy_rac22_strategy,
    pairdist_states,
    quantum_distinguishability,
    quantum_success,
)
from .sdp.hierarchy import hierarchy_min_distinguishability
from .sdp.seesaw import seesaw_max_success
from .tasks import TaskSpec, graph_equality_task, pair_distinguishability_task, rac_task

log = logging.getLogger(__name__)

SCHEMA_LINE = "# distcc-lab schema v1"
FLOAT_FORMAT = "{:.10g}"
BISECTION_STEPS = 12
SEESAW_SEEDS = 3
# Exact alpha(H_d) needs the graph within the independent-set search cap.
HADAMARD_EXACT_MAX_D = 6


@dataclass
class RunManifest:
    command: str
    label: str
    grid: str
    seed: int | None
    version: str = __version__
    wall_clock: float = 0.0
    statuses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepRow:
    S: float
    classical_bound: float
    classical_frontier_p: float | None = None
    quantum_seesaw_p: float | None = None
    hierarchy_lb_p: dict[int, float | None] = field(default_factory=dict)
    status: str = "ok"

    def as_dict(self) -> dict:
        out = {
            "S": self.S,
            "classical_bound": self.classical_bound,
            "classical_frontier_p": self.classical_frontier_p,
            "quantum_seesaw_p": self.quantum_seesaw_p,
        }
        for level, value in sorted(self.hierarchy_lb_p.items()):
            out[f"hierarchy_lb_p_L{level}"] = value
        out["status"] = self.status
        return out


@dataclass
class RunTable:
    columns: list[str]
    rows: list[dict]
    manifest: RunManifest

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(SCHEMA_LINE + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def write_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT.format(float(value))
    return str(value)


def _map(fn, items, workers: int | None):
    """Ordered map, optionally over a process pool."""
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _failure(stage: str, exc: Exception) -> str:
    log.debug("%s failed: %s", stage, exc)
    return f"{stage}:{type(exc).__name__}"


def _finish(columns, rows, manifest: RunManifest, started: float) -> RunTable:
    manifest.statuses = [row.get("status", "ok") for row in rows]
    manifest.wall_clock = time.perf_counter() - started
    return RunTable(columns, rows, manifest)


def _command() -> str:
    return " ".join(sys.argv)


# see-saw in the distinguishability direction ------------------------------------


def seesaw_min_distinguishability(
    task: TaskSpec, S: float, dim: int, seeds: int = SEESAW_SEEDS, seed: int = 0,
    steps: int = BISECTION_STEPS,
) -> float | None:
    """Smallest cap p (to the bisection resolution) at which the see-saw reaches ``S``.

    Returns ``None`` when even p = 1 falls short.
    """
    lo, hi = 1.0 / task.N, 1.0

    def reaches(p):
        return seesaw_max_success(task, dim, p, seeds=seeds, rng_seed=seed).success >= S - 1e-7

    if reaches(lo):
        return lo
    if not reaches(hi):
        return None
    for _ in range(steps):
        mid = (lo + hi) / 2
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi


# RAC sweep ------------------------------------------------------------------------


def _rac_point(args) -> SweepRow:
    n, d, S, dim, levels, seed, seeds = args
    task = rac_task(n, d)
    row = SweepRow(S, rac_bound(n, S))
    problems = []
    try:
        row.classical_frontier_p = classical_min_distinguishability(task, S).dist_cap
    except DistccError as exc:
        problems.append(_failure("frontier", exc))
    if dim:
        try:
            row.quantum_seesaw_p = seesaw_min_distinguishability(task, S, dim, seeds, seed)
            if row.quantum_seesaw_p is None:
                problems.append("seesaw:unreached")
        except DistccError as exc:
            problems.append(_failure("seesaw", exc))
    for level in levels:
        try:
            row.hierarchy_lb_p[level] = hierarchy_min_distinguishability(
                task, level, S, complex_moments=False
            ).bound
        except DistccError as exc:
            row.hierarchy_lb_p[level] = None
            problems.append(_failure(f"hierarchy_L{level}", exc))
    row.status = ";".join(problems) or "ok"
    return row


def run_rac_sweep(
    n: int, d: int, S_grid, dim: int | None = 2, levels=(1, 2), seed: int = 0,
    seeds: int = SEESAW_SEEDS, workers: int | None = None, grid_spec: str = "",
) -> RunTable:
    """Classical bound, LP frontier, see-saw and hierarchy distinguishability per target success."""
    started = time.perf_counter()
    task = rac_task(n, d)  # fail early on caps
    points = [(n, d, float(S), dim, tuple(levels), seed, seeds) for S in S_grid]
    rows = [r.as_dict() for r in _map(_rac_point, points, workers)]
    columns = ["S", "classical_bound", "classical_frontier_p", "quantum_seesaw_p"]
    columns += [f"hierarchy_lb_p_L{L}" for L in sorted(levels)] + ["status"]
    manifest = RunManifest(_command(), task.label, grid_spec, seed)
    manifest.notes.append(f"see-saw bisection: {BISECTION_STEPS} steps on [1/N, 1], {seeds} restarts")
    return _finish(columns, rows, manifest, started)


# small-graph scan -------------------------------------------------------------------


def _graph_point(args) -> dict:
    G, S, level = args
    task = graph_equality_task(G)
    row = {"graph": G.label, "S": S, "classical_bound": graph_bound(G, S)}
    problems = []
    try:
        row["classical_frontier_p"] = classical_min_distinguishability(task, S).dist_cap
    except DistccError as exc:
        problems.append(_failure("frontier", exc))
    try:
        row["hierarchy_lb_p"] = hierarchy_min_distinguishability(
            task, level, S, complex_moments=False
        ).bound
    except DistccError as exc:
        problems.append(_failure("hierarchy", exc))
    if "classical_frontier_p" in row and "hierarchy_lb_p" in row:
        row["gap"] = row["classical_frontier_p"] - row["hierarchy_lb_p"]
    row["status"] = ";".join(problems) or "ok"
    return row


def run_small_graph_scan(
    S_grid, level: int = 2, workers: int | None = None, grid_spec: str = "", graphs=None,
) -> RunTable:
    """Classical frontier against the hierarchy bound on the small-graph catalog."""
    started = time.perf_counter()
    graphs = small_graph_catalog() if graphs is None else graphs
    points = [(G, float(S), level) for G in graphs for S in S_grid]
    rows = _map(_graph_point, points, workers)
    columns = ["graph", "S", "classical_bound", "classical_frontier_p", "hierarchy_lb_p", "gap", "status"]
    manifest = RunManifest(_command(), "graph-equality catalog", grid_spec, None)
    manifest.notes.append(f"hierarchy level {level}")
    for G in graphs:
        gaps = [r["gap"] for r in rows if r["graph"] == G.label and "gap" in r]
        if gaps:
            manifest.notes.append(f"{G.label}: max gap {max(gaps):.3e}")
    return _finish(columns, rows, manifest, started)


def max_gap_by_graph(table: RunTable) -> dict[str, float]:
    out: dict[str, float] = {}
    for row in table.rows:
        if "gap" in row:
            out[row["graph"]] = max(out.get(row["graph"], -math.inf), row["gap"])
    return out


# odd cycles -------------------------------------------------------------------------


def cycle_quantum_success(N: int) -> float:
    return 1 - (2 / 3) * math.sin(math.pi / (2 * N)) ** 2


def cycle_classical_bound(N: int) -> float:
    return (2 / (N - 1)) * (1 - 2 * math.sin(math.pi / (2 * N)) ** 2)


def cycle_ratio(N: int) -> float:
    return N / (N - 1) * (1 - 2 * math.sin(math.pi / (2 * N)) ** 2)


def run_cycle_ratio(N_list) -> RunTable:
    """Distinguishability ratio of the odd-cycle qubit protocol."""
    started = time.perf_counter()
    rows = []
    for N in N_list:
        if N < 5 or N % 2 == 0:
            rows.append({"N": N, "status": "bad-N"})
            continue
        from .graphs import cycle_graph

        S = cycle_quantum_success(N)
        S_strategy = quantum_success(graph_equality_task(cycle_graph(N)), ngon_strategy(N))
        rows.append({
            "N": N,
            "S_Q": S,
            "S_Q_strategy": S_strategy,
            "D_C_bound": cycle_classical_bound(N),
            "D_Q_cap": 2 / N,
            "ratio": cycle_ratio(N),
            "status": "ok" if abs(S - S_strategy) <= 1e-9 else "strategy-mismatch",
        })
    columns = ["N", "S_Q", "S_Q_strategy", "D_C_bound", "D_Q_cap", "ratio", "status"]
    manifest = RunManifest(_command(), "odd cycles", ",".join(map(str, N_list)), None)
    return _finish(columns, rows, manifest, started)


# pair distinguishability --------------------------------------------------------------


def run_pairdist(
    N_list, dim: int = 2, seed: int = 0, S_grid=None, seeds: int = SEESAW_SEEDS,
    workers: int | None = None, grid_spec: str = "",
) -> RunTable:
    """Qubit protocol table per N, plus an optional see-saw trade-off sweep."""
    started = time.perf_counter()
    rows = []
    for N in N_list:
        if N < 2 or N > 8:
            rows.append({"kind": "table", "N": N, "status": "bad-N"})
            continue
        states = pairdist_states(N, dim)
        S = helstrom_pair_success(states)
        row = {"kind": "table", "N": N, "S": S, "classical_bound": pairdist_bound(N, S)}
        try:
            row["D_Q"] = quantum_distinguishability(states)
            row["status"] = "ok"
        except DistccError as exc:
            row["status"] = _failure("sdp", exc)
        rows.append(row)
    if S_grid is not None:
        points = [(N, float(S), dim, seed, seeds) for N in N_list if 2 <= N <= 8 for S in S_grid]
        rows += _map(_pair_sweep_point, points, workers)
    columns = ["kind", "N", "S", "classical_bound", "classical_frontier_p", "quantum_seesaw_p", "D_Q", "status"]
    manifest = RunManifest(_command(), "pair distinguishability", grid_spec, seed)
    manifest.notes.append(f"state dimension {dim}")
    return _finish(columns, rows, manifest, started)


def _pair_sweep_point(args) -> dict:
    N, S, dim, seed, seeds = args
    task = pair_distinguishability_task(N)
    row = {"kind": "sweep", "N": N, "S": S, "classical_bound": pairdist_bound(N, S)}
    problems = []
    try:
        row["classical_frontier_p"] = classical_min_distinguishability(task, S).dist_cap
    except DistccError as exc:
        problems.append(_failure("frontier", exc))
    try:
        row["quantum_seesaw_p"] = seesaw_min_distinguishability(task, S, dim, seeds, seed)
        if row["quantum_seesaw_p"] is None:
            problems.append("seesaw:unreached")
    except DistccError as exc:
        problems.append(_failure("seesaw", exc))
    row["status"] = ";".join(problems) or "ok"
    return row


# Hadamard graphs ------------------------------------------------------------------------


def hadamard_log10_ratio(d: int) -> float:
    """log10 of (1.005)^d / d, the guaranteed classical/quantum ratio at perfect success."""
    return d * math.log10(1.005) - math.log10(d)


def run_hadamard_ratio(d_list) -> RunTable:
    started = time.perf_counter()
    rows = []
    for d in d_list:
        row = {"d": d, "log10_ratio_formula": hadamard_log10_ratio(d)}
        problems = []
        if d % 2 == 0 and d <= HADAMARD_EXACT_MAX_D:
            try:
                G = hadamard_graph(d)
                alpha = independence_number(G)
                kets = hadamard_kets(d)
                row.update(
                    alpha=alpha,
                    D_C_bound=1 / alpha,
                    D_Q_cap=d / 2**d,
                    D_Q_sdp=quantum_distinguishability(kets),
                    S_Q=graph_success_from_overlaps(G, kets),
                    log10_ratio_exact=math.log10(2**d / (alpha * d)),
                )
            except DistccError as exc:
                problems.append(_failure("explicit", exc))
        row["status"] = ";".join(problems) or "ok"
        rows.append(row)
    columns = ["d", "log10_ratio_formula", "alpha", "D_C_bound", "D_Q_cap", "D_Q_sdp", "S_Q",
               "log10_ratio_exact", "status"]
    manifest = RunManifest(_command(), "Hadamard graphs", ",".join(map(str, d_list)), None)
    return _finish(columns, rows, manifest, started)


# distinguishability advantage without a dimension advantage ---------------------------------


OBS3_P = 4 / 7


def run_obs3_comparison(p: float = OBS3_P) -> RunTable:
    """Depolarized qubit RAC: beats classical at equal distinguishability, not at equal dimension."""
    started = time.perf_counter()
    strat = noisy_rac22_strategy(p)
    S_Q = quantum_success(rac_task(2, 2), strat)
    D_Q = quantum_distinguishability(strat.states)
    cap = (1 + D_Q) / 2
    dim2 = dim_bounded_success("rac2", d=2, d_C=2)
    row = {
        "p": p,
        "S_Q": S_Q,
        "D_Q": D_Q,
        "classical_cap_at_D_Q": cap,
        "classical_dim2_optimum": dim2,
        "distinguishability_advantage": S_Q > cap,
        "dimension_advantage": S_Q > dim2,
        "status": "ok",
    }
    manifest = RunManifest(_command(), "rac(2,2) depolarized", f"p={p}", None)
    return _finish(list(row), [row], manifest, started)

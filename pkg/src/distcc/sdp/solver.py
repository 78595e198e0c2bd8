"""Solver session used by every LP and SDP in the package.

:class:`ConicProblem` is a small facade over cvxpy: declare real or complex
Hermitian variables and parameters, add affine and PSD constraints, set a
linear objective and solve. Complex Hermitian PSD constraints are handed to
the backend through cvxpy's real embedding ``[[Re, -Im], [Im, Re]] >> 0``.

Swapping backends only requires a solver name that cvxpy knows. For Clarabel
the raw primal and dual objectives are read back so that a genuine duality gap
is reported; other backends report ``gap=None``.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np

from ..errors import Infeasible, SolverFailure

log = logging.getLogger(__name__)

SDP_SOLVER = "CLARABEL"
LP_SOLVER = "SCIPY"  # HiGHS through scipy.optimize.linprog
GAP_TOL = 1e-7
# "inaccurate" results are returned, flagged, when the gap stays below this
INACCURATE_GAP_TOL = 1e-5

SOLVER_OPTIONS = {
    "CLARABEL": {
        "tol_gap_abs": 1e-8,
        "tol_gap_rel": 1e-8,
        "tol_feas": 1e-8,
        "max_iter": 400,
    },
    "SCIPY": {"scipy_options": {"method": "highs"}},
}

_STATUS = {
    cp.OPTIMAL: "optimal",
    cp.OPTIMAL_INACCURATE: "inaccurate",
    cp.INFEASIBLE: "infeasible",
    cp.INFEASIBLE_INACCURATE: "infeasible",
    cp.UNBOUNDED: "unbounded",
    cp.UNBOUNDED_INACCURATE: "unbounded",
}


@dataclass(frozen=True)
class SolveResult:
    status: str
    value: float
    gap: float | None
    solver: str

    @property
    def accepted(self) -> bool:
        return self.status == "optimal" and (self.gap is None or self.gap <= GAP_TOL)

    @property
    def usable(self) -> bool:
        """Accepted, or Clarabel's "almost solved" with a still small gap."""
        if self.accepted:
            return True
        return self.status == "inaccurate" and self.gap is not None and self.gap <= INACCURATE_GAP_TOL

    def require(self) -> "SolveResult":
        if self.status == "infeasible":
            raise Infeasible(f"{self.solver}: problem certified infeasible")
        if not self.usable:
            raise SolverFailure(f"{self.solver}: status={self.status}, gap={self.gap}")
        return self


class ConicProblem:
    """One solver session. Re-solvable after parameter updates, not thread-safe."""

    def __init__(self, solver: str = SDP_SOLVER, **options):
        self.solver = solver
        self.options = {**SOLVER_OPTIONS.get(solver, {}), **options}
        self.constraints: list = []
        self._objective = None
        self._problem: cp.Problem | None = None

    # declarations ----------------------------------------------------------
    @staticmethod
    def hermitian(n: int, name: str | None = None) -> cp.Variable:
        return cp.Variable((n, n), hermitian=True, name=name)

    @staticmethod
    def real(shape=(), nonneg: bool = False, name: str | None = None) -> cp.Variable:
        return cp.Variable(shape, nonneg=nonneg, name=name)

    @staticmethod
    def parameter(shape=(), name: str | None = None) -> cp.Parameter:
        return cp.Parameter(shape, name=name)

    def add(self, *constraints) -> None:
        self._problem = None
        self.constraints.extend(constraints)

    def psd(self, expr) -> None:
        # cvxpy needs a syntactically Hermitian expression for >>.
        if expr.is_complex():
            expr = (expr + expr.H) / 2
        else:
            expr = (expr + expr.T) / 2
        self.add(expr >> 0)

    def maximize(self, expr) -> None:
        self._problem = None
        self._objective = cp.Maximize(expr)

    def minimize(self, expr) -> None:
        self._problem = None
        self._objective = cp.Minimize(expr)

    # solving ---------------------------------------------------------------
    @property
    def problem(self) -> cp.Problem:
        if self._objective is None:
            raise ValueError("objective not set")
        if self._problem is None:
            self._problem = cp.Problem(self._objective, self.constraints)
        return self._problem

    def solve(self) -> SolveResult:
        prob = self.problem
        try:
            with warnings.catch_warnings():
                # an inaccurate solve is reported through the status instead
                warnings.simplefilter("ignore", UserWarning)
                data, chain, inverse = prob.get_problem_data(self.solver)
                raw = chain.solve_via_data(prob, data, False, False, self.options)
                prob.unpack_results(raw, chain, inverse)
        except cp.SolverError as exc:
            log.debug("solver error: %s", exc)
            return SolveResult("failed", float("nan"), None, self.solver)
        status = _STATUS.get(prob.status, "failed")
        gap = None
        if hasattr(raw, "obj_val_dual"):
            gap = abs(float(raw.obj_val) - float(raw.obj_val_dual))
            if not np.isfinite(gap):
                gap = None
        if status == "optimal" and gap is not None and gap > GAP_TOL:
            status = "inaccurate"
        value = float(prob.value) if status in ("optimal", "inaccurate") else float("nan")
        return SolveResult(status, value, gap, self.solver)


def hermitian_part(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


def real_inner(X, B: np.ndarray):
    """``tr(X B)`` for Hermitian ``X`` (cvxpy) and constant Hermitian ``B``, as a real expression."""
    Bt = B.T
    return cp.sum(cp.multiply(cp.real(X), Bt.real)) - cp.sum(cp.multiply(cp.imag(X), Bt.imag))


def real_inner_param(X, Bre: cp.Parameter, Bim: cp.Parameter):
    """Same as :func:`real_inner` with ``Bre = Re(B^T)``, ``Bim = Im(B^T)`` as parameters."""
    return cp.sum(cp.multiply(cp.real(X), Bre)) - cp.sum(cp.multiply(cp.imag(X), Bim))


def set_hermitian_param(Bre: cp.Parameter, Bim: cp.Parameter, B: np.ndarray) -> None:
    Bt = np.asarray(B).T
    Bre.value = np.ascontiguousarray(Bt.real)
    Bim.value = np.ascontiguousarray(Bt.imag)

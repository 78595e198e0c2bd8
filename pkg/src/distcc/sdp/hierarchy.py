"""Dimension-free SDP relaxations built from hinged moment matrices.

For a positive operator tau and operator words O_i, the moment matrix
Gamma_tau[i, j] = tr(tau O_i^dagger O_j) is positive semidefinite. Words run
over the letters M_{z|y} with z < D - 1 (the last outcome is implied by
completeness). Measurements are taken projective, so a letter repeated next to
itself collapses and two different outcomes of the same y annihilate.

Moment entries that reduce to the same operator word are the same number, and
the entry of the adjoint (reversed) word is its complex conjugate. Each
moment matrix is therefore parametrized by one real vector per hinge operator:
the real parts of all canonical words plus the imaginary parts of the
non-palindromic ones. Projectivity and Hermitian consistency are built into
that parametrization instead of being imposed as equality constraints.

With ``complex_moments=False`` the imaginary parts are dropped. Task
coefficients are real, so the entrywise conjugate of a feasible family of
moment matrices is feasible with the same objective, and averaging the two
gives a real feasible point: the real relaxation has exactly the same optimum
at a quarter of the PSD cone size.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

import cvxpy as cp
import numpy as np
import scipy.sparse as sp

from ..errors import Infeasible, SizeExceeded
from ..tasks import TaskSpec
from .solver import ConicProblem, SolveResult

MAX_LEVEL = 3
MAX_MOMENT_SIZE = 500
SUCCESS_SLACK = 1e-8

Letter = tuple[int, int]  # (y, z), 0-based
Word = tuple[Letter, ...]


def reduce_word(word) -> Word | None:
    """Normal form under projectivity, or ``None`` for the zero operator."""
    out: list[Letter] = []
    for letter in word:
        if out and out[-1][0] == letter[0]:
            if out[-1][1] != letter[1]:
                return None
            continue
        out.append(letter)
    return tuple(out)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return "".join(f"M[{z + 1}|{y + 1}]" for y, z in word)


@dataclass(frozen=True)
class MomentStructure:
    level: int
    M: int
    D: int
    monomials: tuple[Word, ...]
    # entry_key[i, j] >= 0 indexes ``keys``; -1 marks a structural zero.
    entry_key: np.ndarray = field(repr=False)
    # entry_conj[i, j] is True where the entry is the conjugate of its key.
    entry_conj: np.ndarray = field(repr=False)
    keys: tuple[Word, ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.monomials)

    @cached_property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.monomials)}

    def prob_locator(self, y: int, z: int) -> int:
        """Column of the first row holding p(z|x,y) for z < D - 1."""
        return self.index[((y, z),)]

    @cached_property
    def palindromic(self) -> np.ndarray:
        return np.array([k == k[::-1] for k in self.keys])

    @cached_property
    def embedding(self) -> tuple[sp.csr_matrix, sp.csr_matrix, int, int]:
        """Sparse maps from the real variable vector to vec(Re Gamma) and vec(Im Gamma).

        The vector is [real parts of all keys, imaginary parts of the
        non-palindromic keys].
        """
        n, nk = self.size, len(self.keys)
        im_slot = -np.ones(nk, dtype=int)
        im_slot[~self.palindromic] = np.arange(int((~self.palindromic).sum()))
        n_im = int((~self.palindromic).sum())
        rr, rc, ir, ic, iv = [], [], [], [], []
        for i in range(n):
            for j in range(n):
                k = self.entry_key[i, j]
                if k < 0:
                    continue
                pos = i * n + j
                rr.append(pos)
                rc.append(k)
                if im_slot[k] >= 0:
                    ir.append(pos)
                    ic.append(nk + im_slot[k])
                    iv.append(-1.0 if self.entry_conj[i, j] else 1.0)
        nv = nk + n_im
        R = sp.csr_matrix((np.ones(len(rr)), (rr, rc)), shape=(n * n, nv))
        Im = sp.csr_matrix((iv, (ir, ic)), shape=(n * n, nv))
        return R, Im, nv, nk

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.level, self.M, self.D, self.monomials)).encode())
        h.update(self.entry_key.tobytes())
        h.update(self.entry_conj.tobytes())
        return h.hexdigest()


def build_moment_structure(task: TaskSpec, level: int) -> MomentStructure:
    if level < 1:
        raise ValueError("level must be >= 1")
    if level > MAX_LEVEL:
        raise SizeExceeded(f"levels above {MAX_LEVEL} are not supported")
    M, D = task.M, task.D
    letters = [(y, z) for y in range(M) for z in range(D - 1)]
    layers: list[list[Word]] = [[()]]
    size = 1
    for _ in range(level):
        nxt = []
        for w in layers[-1]:
            for letter in letters:
                if w and w[-1][0] == letter[0]:
                    continue
                nxt.append(w + (letter,))
        size += len(nxt)
        if size > MAX_MOMENT_SIZE:
            raise SizeExceeded(f"moment matrix would exceed {MAX_MOMENT_SIZE} rows")
        layers.append(nxt)
    monomials = tuple(w for layer in layers for w in sorted(layer))

    n = len(monomials)
    key_index: dict[Word, int] = {}
    keys: list[Word] = []
    entry_key = -np.ones((n, n), dtype=int)
    entry_conj = np.zeros((n, n), dtype=bool)
    for i, wi in enumerate(monomials):
        for j, wj in enumerate(monomials):
            w = reduce_word(wi[::-1] + wj)
            if w is None:
                continue
            canon = min(w, w[::-1])
            if canon not in key_index:
                key_index[canon] = len(keys)
                keys.append(canon)
            entry_key[i, j] = key_index[canon]
            entry_conj[i, j] = w != canon
    entry_key.setflags(write=False)
    entry_conj.setflags(write=False)
    return MomentStructure(level, M, D, monomials, entry_key, entry_conj, tuple(keys))


@dataclass
class HierarchyResult:
    level: int
    bound: float
    status: str
    gap: float | None
    p_cap: float | None = None
    S_target: float | None = None
    witnesses: dict = field(default_factory=dict, repr=False)
    structure: MomentStructure | None = field(default=None, repr=False)

    def certificate(self) -> dict:
        ms = self.structure
        return {
            "level": self.level,
            "p_cap": self.p_cap,
            "S_target": self.S_target,
            "bound": self.bound,
            "status": self.status,
            "duality_gap": self.gap,
            "monomials": [format_word(w) for w in ms.monomials] if ms else [],
            "constraint_digest": ms.digest() if ms else None,
        }

    def certificate_json(self) -> str:
        return json.dumps(self.certificate(), indent=2)


class _Relaxation:
    def __init__(self, task: TaskSpec, level: int, complex_moments: bool = True):
        self.task = task
        self.ms = build_moment_structure(task, level)
        R, Im, nv, nk = self.ms.embedding
        if not complex_moments:
            R, Im, nv = R[:, :nk], None, nk
        self.maps = R, Im
        n = self.ms.size
        self.prob = ConicProblem()
        N = task.N
        self.vec_rho = [self.prob.real(nv) for _ in range(N)]
        self.vec_theta = self.prob.real(nv)

        def embed(v):
            re = cp.reshape(R @ v, (n, n), order="C")
            if Im is None:
                return re
            im = cp.reshape(Im @ v, (n, n), order="C")
            return cp.bmat([[re, -im], [im, re]])

        self.embed = embed
        ident = self.ms.entry_key[0, 0]
        for x in range(N):
            self.prob.psd(embed(self.vec_rho[x]))
            self.prob.psd(embed(self.vec_theta - self.vec_rho[x]))
            self.prob.add(self.vec_rho[x][ident] == 1)
        self.theta_trace = self.vec_theta[ident]
        self.success = self._success_expr()

    def _success_expr(self):
        task, ms = self.task, self.ms
        c = task.coeffs
        D = task.D
        terms = []
        const = 0.0
        for x in range(task.N):
            for y in range(task.M):
                # p(D-1|x,y) = 1 - sum_{z<D-1} p(z|x,y)
                const += c[x, y, D - 1]
                for z in range(D - 1):
                    coef = c[x, y, z] - c[x, y, D - 1]
                    if coef != 0:
                        k = ms.entry_key[0, ms.prob_locator(y, z)]
                        terms.append(coef * self.vec_rho[x][k])
        return const + (cp.sum(cp.hstack(terms)) if terms else 0)

    def result(self, res: SolveResult, **kw) -> HierarchyResult:
        witnesses = {
            "rho": [self._gamma(v.value) for v in self.vec_rho],
            "theta": self._gamma(self.vec_theta.value),
        }
        return HierarchyResult(
            self.ms.level, res.value, res.status, res.gap,
            witnesses=witnesses, structure=self.ms, **kw,
        )

    def _gamma(self, v) -> np.ndarray:
        R, Im = self.maps
        n = self.ms.size
        gamma = R @ v if Im is None else R @ v + 1j * (Im @ v)
        return gamma.astype(complex).reshape(n, n)


def hierarchy_max_success(
    task: TaskSpec, level: int, p: float, complex_moments: bool = True
) -> HierarchyResult:
    """Upper bound on the quantum success when the distinguishability is at most ``p``."""
    rel = _Relaxation(task, level, complex_moments)
    rel.prob.add(rel.theta_trace <= task.N * p)
    rel.prob.maximize(rel.success)
    res = rel.prob.solve().require()
    return rel.result(res, p_cap=p)


def hierarchy_min_distinguishability(
    task: TaskSpec, level: int, S_target: float, complex_moments: bool = True
) -> HierarchyResult:
    """Lower bound on the quantum distinguishability needed to reach ``S_target``."""
    rel = _Relaxation(task, level, complex_moments)
    rel.prob.add(rel.success >= S_target - SUCCESS_SLACK)
    rel.prob.minimize(rel.theta_trace / task.N)
    res = rel.prob.solve()
    if res.status == "infeasible":
        raise Infeasible(f"success {S_target} is out of reach at level {level}")
    res.require()
    return rel.result(res, S_target=S_target)

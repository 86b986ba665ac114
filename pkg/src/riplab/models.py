"""Model classes, their pointwise suprema ``bhat`` and covering-number bounds."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .bases import BasisFamily, FunctionExpansion, eval_basis, sup_norms

MAX_SUPPORTS = 10**6
DEFAULT_SPARSE_COVERING_C = 2.0


class CapabilityError(NotImplementedError):
    """The requested operation is not available for this model class."""


@dataclass(frozen=True)
class LinearSpan:
    """``span{B_j : j in indices}``; all of ``basis`` when ``indices`` is None."""

    basis: BasisFamily
    indices: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        idx = tuple(range(self.basis.size)) if self.indices is None else tuple(int(j) for j in self.indices)
        if not idx:
            raise ValueError("a linear span needs at least one basis function")
        object.__setattr__(self, "indices", idx)

    @property
    def dim(self) -> int:
        return len(self.indices)

    def bhat(self, y) -> np.ndarray:
        return bhat_linear(self.basis, self.indices)(y)

    bhat_is_exact = True


@dataclass(frozen=True)
class WeightedSparse:
    """``M_{omega,s}`` intersected with the span of the first ``basis.size`` functions."""

    basis: BasisFamily
    omega: np.ndarray = field(repr=False)
    s: float

    def __post_init__(self):
        om = np.asarray(self.omega, dtype=float).copy()
        if om.shape != (self.basis.size,):
            raise ValueError("need one weight per basis function")
        if np.any(om <= 0):
            raise ValueError("weights must be positive")
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)

    def bhat(self, y) -> np.ndarray:
        return bhat_sparse_bound(self.basis, self.omega, self.s)(y)

    bhat_is_exact = False

    def bhat_exact(self, y) -> np.ndarray:
        return bhat_sparse_exact(self.basis, self.omega, self.s, y)

    def supports(self) -> list[tuple[int, ...]]:
        return maximal_supports(self.omega, self.s)

    def contains(self, v: FunctionExpansion, tol: float = 1e-9) -> bool:
        return sparse_membership(v, self.omega, self.s, tol)[0]


@dataclass(frozen=True)
class Singleton:
    """The one-element set ``{v}``."""

    v: FunctionExpansion

    @property
    def basis(self) -> BasisFamily:
        return self.v.basis

    def bhat(self, y) -> np.ndarray:
        norm2 = self.v.l2_norm() ** 2
        return self.v(y) ** 2 / norm2

    bhat_is_exact = True


@dataclass(frozen=True)
class TensorRank:
    """Order-``order`` tensors in ``(R^m)^{(x) order}`` of rank at most ``rank``."""

    m: int
    order: int
    rank: int

    bhat_is_exact = True


def bhat_linear(basis: BasisFamily, indices: Optional[Sequence[int]] = None) -> Callable:
    """``y -> ||B(y)||_2^2`` over the given indices."""
    idx = list(range(basis.size)) if indices is None else list(indices)
    if not idx:
        raise ValueError("empty index set")
    sub = BasisFamily(basis.kind, max(idx) + 1, basis.domain)

    def bhat(y):
        return np.sum(eval_basis(sub, y)[..., idx] ** 2, axis=-1)

    return bhat


def bhat_sparse_bound(basis: BasisFamily, omega, s: float) -> Callable:
    """Upper bound ``s ||W B(y)||_inf^2`` with ``W = diag(omega)^-1``.

    For a support ``S`` with ``sum_{j in S} omega_j^2 <= s`` one has
    ``sum_{j in S} B_j^2 <= s max_j (B_j / omega_j)^2``, so this dominates the
    exact ``bhat`` of ``M_{omega,s}``.  It also dominates
    :func:`bhat_sparse_quotient`.
    """
    omega = np.asarray(omega, dtype=float)

    def bhat(y):
        z = eval_basis(basis, y) / omega
        return s * np.max(z**2, axis=-1)

    return bhat


def bhat_sparse_quotient(basis: BasisFamily, omega, s: float) -> Callable:
    """``s ||W B(y)||_2^4 / ||W B(y)||_1^2`` with ``W = diag(omega)^-1``.

    This is the Rayleigh quotient of ``W B B^T W`` at ``W B`` over the
    squared l1 norm, which is not a bound on ``bhat`` in general.  It is kept
    as the sampling density of the reweighted l1 experiments.  The quotient
    is taken as zero where ``B(y)`` vanishes.
    """
    omega = np.asarray(omega, dtype=float)

    def bhat(y):
        z = eval_basis(basis, y) / omega
        l2sq = np.sum(z**2, axis=-1)
        l1 = np.sum(np.abs(z), axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(l1 > 0, s * l2sq**2 / np.where(l1 > 0, l1, 1.0) ** 2, 0.0)

    return bhat


def maximal_supports(omega, s: float, limit: int = MAX_SUPPORTS) -> list[tuple[int, ...]]:
    """All supports ``S`` with ``sum_{j in S} omega_j^2 <= s`` not contained in a larger one."""
    w2 = np.asarray(omega, dtype=float) ** 2
    m = w2.size
    order = np.argsort(w2)
    # the largest admissible support cannot exceed the count of the smallest weights
    kmax = int(np.searchsorted(np.cumsum(w2[order]), s * (1 + 1e-12), side="right"))
    if kmax == 0:
        return []
    count = sum(math.comb(m, k) for k in range(1, kmax + 1))
    if count > limit:
        raise CapabilityError(f"{count} candidate supports exceed the enumeration limit {limit}")
    found = []
    tol = s * 1e-12
    for k in range(kmax, 0, -1):
        for S in itertools.combinations(range(m), k):
            total = w2[list(S)].sum()
            if total > s + tol:
                continue
            rest = np.setdiff1d(np.arange(m), S)
            if rest.size and total + w2[rest].min() <= s + tol:
                continue
            found.append(S)
    return found


def bhat_sparse_exact(basis: BasisFamily, omega, s: float, y) -> np.ndarray:
    """Exact ``bhat`` of ``M_{omega,s}`` by support enumeration: ``max_S sum_{j in S} B_j(y)^2``."""
    b2 = eval_basis(basis, y) ** 2
    supports = maximal_supports(omega, s)
    if not supports:
        return np.zeros(np.shape(y))
    return np.max(np.stack([b2[..., list(S)].sum(axis=-1) for S in supports]), axis=0)


def sparse_weighted_cardinality(v: FunctionExpansion, omega, tol: float = 1e-9) -> float:
    """``||v||_{omega,0}``; coefficients below ``tol * max|c|`` count as zero."""
    c = np.abs(v.coefficients)
    if not c.any():
        return 0.0
    support = c > tol * c.max()
    return float(np.sum(np.asarray(omega, dtype=float)[support] ** 2))


def sparse_membership(v: FunctionExpansion, omega, s: float, tol: float = 1e-9):
    """``(v in M_{omega,s}, ||v||_{omega,0})``."""
    card = sparse_weighted_cardinality(v, omega, tol)
    return card <= s * (1 + 1e-12), card


@dataclass(frozen=True)
class WeightSequence:
    values: np.ndarray = field(repr=False)

    def admissible(self, basis: BasisFamily, weight: Optional[Callable] = None) -> bool:
        """``omega_j >= ||B_j||_{w,inf}`` for every ``j``."""
        return bool(np.all(np.asarray(self.values) >= sup_norms(basis, weight) * (1 - 1e-9)))


def covering_bound(model, r: float, *, sparse_c: float = DEFAULT_SPARSE_COVERING_C,
                   tensor_k: Optional[float] = None) -> float:
    """Closed-form upper bound on the ``||.||_{w,inf}`` covering number of ``U(model)``."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if isinstance(model, LinearSpan):
        m = model.dim
        return (r / (2 * m)) ** (-m)
    if isinstance(model, WeightedSparse):
        m, s = model.basis.size, model.s
        return (sparse_c * m / (r * math.sqrt(s))) ** s
    if isinstance(model, TensorRank):
        k = model.m ** (model.order / 2) if tensor_k is None else tensor_k
        M, rk, m = model.order, model.rank, model.m
        exponent = M * rk**3 + M * m * rk
        return (r / (3 * (2 * M - 1) * math.sqrt(rk) * k)) ** (-exponent)
    raise CapabilityError(f"no covering bound for {type(model).__name__}")


def hyperbolic_cross(s: float, order: int) -> list[tuple[int, ...]]:
    """Multi-indices ``j`` with ``prod_k (2 j_k + 1) <= s``."""
    out = []

    def rec(prefix, budget):
        if len(prefix) == order:
            out.append(tuple(prefix))
            return
        j = 0
        while 2 * j + 1 <= budget:
            rec(prefix + [j], budget / (2 * j + 1))
            j += 1

    rec([], s)
    return out


def _rank1(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


def _contract_except(y: np.ndarray, factors, skip: int) -> np.ndarray:
    out = y
    # contract from the last axis down so axis numbering stays valid
    for k in range(len(factors) - 1, -1, -1):
        if k != skip:
            out = np.tensordot(out, factors[k], axes=([k], [0]))
    return out


def rank1_supremum(y: np.ndarray, restarts: int = 5, sweeps: int = 50, rng=None) -> float:
    """``sup (v, y)_Fro^2`` over unit-Frobenius rank-1 ``v`` by alternating maximization."""
    rng = np.random.default_rng(rng)
    best = 0.0
    for _ in range(restarts):
        factors = [f / np.linalg.norm(f) for f in (rng.standard_normal(d) for d in y.shape)]
        value = 0.0
        for _ in range(sweeps):
            for k in range(y.ndim):
                g = _contract_except(y, factors, k)
                nrm = np.linalg.norm(g)
                if nrm == 0:
                    break
                factors[k] = g / nrm
            new = float(np.tensordot(y, _rank1(factors), axes=y.ndim)) ** 2
            if abs(new - value) <= 1e-15 * max(1.0, new):
                value = new
                break
            value = new
        best = max(best, value)
    return best


@dataclass
class TensorCheckReport:
    m: int
    order: int
    trials: int
    rank1_sups: np.ndarray
    full_sups: np.ndarray
    max_relative_gap: float


def tensor_variation_check(m: int, order: int, trials: int, seed=0, restarts: int = 5) -> TensorCheckReport:
    """Compare rank-1 and full-space suprema of ``(v, y)_Fro^2`` for random rank-1 ``y``."""
    if m**order > 4096:
        raise ValueError("tensor too large for the dense check")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    r1 = np.empty(trials)
    full = np.empty(trials)
    for t in range(trials):
        y = _rank1([rng.standard_normal(m) for _ in range(order)])
        y /= np.linalg.norm(y)
        r1[t] = rank1_supremum(y, restarts=restarts, rng=rng)
        # sup over the unit sphere is ||y||_Fro^4 / ||y||^2 = ||y||_Fro^2 for the Frobenius norm
        full[t] = np.linalg.norm(y) ** 2
    gap = float(np.max(np.abs(r1 - full) / full))
    return TensorCheckReport(m, order, trials, r1, full, gap)

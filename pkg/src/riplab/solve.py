"""Estimators: weighted least squares, weighted l1 interpolation and the projection oracle."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from .bases import BasisFamily, FunctionExpansion, eval_basis
from .measure import QuadratureRule, WeightedMeasure, child_seed, gauss_quadrature
from .norms import EmpiricalDesign, Seminorm, gram_matrix, point_value

__all__ = [
    "InfeasibleError",
    "SolveReport",
    "Target",
    "best_approximation_oracle",
    "design_matrix",
    "error_ratio_experiment",
    "runge",
    "weighted_l1_interpolate",
    "weighted_least_squares",
]


class InfeasibleError(ValueError):
    """The interpolation constraints admit no solution."""


@dataclass(frozen=True)
class Target:
    """A target function with analytic derivatives.

    ``derivative(y, k)`` must return the ``k``-th derivative for every ``k``
    up to ``max_order``.
    """

    name: str
    derivative: Callable = field(repr=False)
    max_order: int = 0

    def __call__(self, y):
        return self.derivative(y, 0)

    def samples(self, y, order: int = 0) -> np.ndarray:
        """Stack ``u^(k)(y)`` for ``k <= order``: shape ``shape(y) + (order + 1,)``."""
        if order > self.max_order:
            raise ValueError(f"{self.name} provides derivatives up to order {self.max_order}")
        return np.stack([self.derivative(y, k) for k in range(order + 1)], axis=-1)


def runge(c: float = 25.0) -> Target:
    """``1 / (1 + c x^2)`` with derivatives up to order 2."""

    def d(y, k):
        y = np.asarray(y, dtype=float)
        q = 1.0 + c * y * y
        if k == 0:
            return 1.0 / q
        if k == 1:
            return -2.0 * c * y / q**2
        if k == 2:
            return (6.0 * c * c * y * y - 2.0 * c) / q**3
        raise ValueError("runge target provides derivatives up to order 2")

    return Target(f"runge({c:g})", d, 2)


def expansion_target(v: FunctionExpansion) -> Target:
    """Wrap an expansion as a target with exact derivatives of every order."""
    return Target("expansion", lambda y, k: v.derivatives(y, k)[k], 10**6)


@dataclass
class SolveReport:
    coefficients: np.ndarray
    residual: float
    condition: float = np.nan
    rank_deficient: bool = False
    iterations: int = 0
    objective: float = np.nan

    def expansion(self, basis: BasisFamily) -> FunctionExpansion:
        return FunctionExpansion(basis, self.coefficients)


def design_matrix(basis: BasisFamily, design: EmpiricalDesign) -> np.ndarray:
    """Rows ``sqrt(w_i / n) * L B(y_i)`` so that ``||A c||_2 = ||v||_n``."""
    S = design.seminorm.stack(basis, design.points)  # (n, h, m)
    scale = np.sqrt(design.weights / design.n)[:, None, None]
    return (scale * S).reshape(-1, basis.size)


def weighted_least_squares(u_samples, design: EmpiricalDesign, basis: BasisFamily) -> SolveReport:
    """Minimize ``||u - v||_n`` over ``span(basis)``.

    ``u_samples`` holds ``u(y_i)`` (shape ``(n,)``) or, for a Sobolev
    seminorm of order ``k``, the derivative stack with shape ``(n, k + 1)``.
    Rank-deficient systems return the minimum-norm solution.
    """
    h = design.seminorm.height
    u = np.asarray(u_samples, dtype=float).reshape(design.n, -1)
    if u.shape[1] != h:
        raise ValueError(f"expected {h} sample values per point, got {u.shape[1]}")
    A = design_matrix(basis, design)
    rhs = (np.sqrt(design.weights / design.n)[:, None] * u).ravel()
    coef, _, rank, _ = scipy.linalg.lstsq(A, rhs, lapack_driver="gelsy")
    sv = np.linalg.svd(A, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 and A.shape[0] >= A.shape[1] else np.inf
    residual = float(np.linalg.norm(A @ coef - rhs))
    return SolveReport(coef, residual, cond, rank < basis.size)


def weighted_l1_interpolate(points, values, basis: BasisFamily, omega=None) -> SolveReport:
    """``min ||diag(omega) v||_1`` subject to ``v^T B(x_i) = y_i``.

    Solved as a linear program in ``(p, q) >= 0`` with ``v = p - q`` by the
    HiGHS dual simplex, so the returned coefficients are a vertex solution.
    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    m = basis.size
    omega = np.ones(m) if omega is None else np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("l1 weights must be positive")
    B = eval_basis(basis, points)
    lp = linprog(np.concatenate([omega, omega]), A_eq=np.hstack([B, -B]), b_eq=values,
                 bounds=(0, None), method="highs-ds",
                 options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    if lp.status == 2:
        raise InfeasibleError("interpolation constraints are inconsistent")
    if lp.status != 0:
        raise RuntimeError(f"l1 solver failed: {lp.message}")
    coef = lp.x[:m] - lp.x[m:]
    residual = float(np.max(np.abs(B @ coef - values), initial=0.0))
    return SolveReport(coef, residual, iterations=int(lp.nit), objective=float(omega @ np.abs(coef)))


def best_approximation_oracle(u, basis: BasisFamily, seminorm: Optional[Seminorm] = None,
                              rule: Optional[QuadratureRule] = None):
    """Best approximation of ``u`` in ``span(basis)`` and its error, by quadrature.

    ``u`` is a :class:`Target` (or a plain callable for the point seminorm).
    """
    seminorm = seminorm or point_value()
    if rule is None:
        rule = gauss_quadrature(max(8 * basis.size, 400), basis.domain)
    order = seminorm.height - 1
    if isinstance(u, Target):
        U = u.samples(rule.nodes, order)
    else:
        if order:
            raise ValueError("Sobolev projections need a Target with derivatives")
        U = np.asarray(u(rule.nodes), dtype=float)[:, None]
    S = seminorm.stack(basis, rule.nodes)  # (q, h, m)
    rhs = np.einsum("q,qhi,qh->i", rule.weights, S, U)
    if seminorm.kind == "point":
        coef = rhs  # orthonormal basis
    else:
        coef = np.linalg.solve(gram_matrix(basis, seminorm, rule), rhs)
    resid = U - S @ coef
    err = float(np.sqrt(max(rule.weights @ np.sum(resid**2, axis=-1), 0.0)))
    return coef, err


@dataclass
class ErrorRatioResult:
    n: int
    ratios: np.ndarray
    best_error: float

    def quantiles(self, qs=(0.1, 0.5, 0.9)) -> np.ndarray:
        return np.quantile(self.ratios, qs)


def error_ratio_experiment(u, basis: BasisFamily, measure: WeightedMeasure, n: int,
                           repetitions: int, seed: int = 0,
                           rule: Optional[QuadratureRule] = None) -> ErrorRatioResult:
    """Samples of ``e_n / e - 1`` for the L2 least-squares estimator."""
    if rule is None:
        rule = gauss_quadrature(max(8 * basis.size, 400), basis.domain)
    coef_best, e = best_approximation_oracle(u, basis, rule=rule)
    if e <= 1e-12:
        raise ValueError("target lies in the model space; e_n / e is undefined")
    uq = np.asarray(u(rule.nodes), dtype=float)
    Bq = eval_basis(basis, rule.nodes)
    ratios = np.empty(repetitions)
    for r in range(repetitions):
        design = EmpiricalDesign.draw(measure, n, child_seed(seed, r))
        rep = weighted_least_squares(u(design.points), design, basis)
        en = np.sqrt(rule.weights @ (uq - Bq @ rep.coefficients) ** 2)
        ratios[r] = en / e - 1.0
    return ErrorRatioResult(n, ratios, e)

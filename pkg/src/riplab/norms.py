"""Seminorms, true and empirical norms, quadrature errors and the RIP test."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bases import BasisFamily, FunctionExpansion, eval_basis, eval_basis_derivatives, grid_sup
from .measure import QuadratureRule, gauss_quadrature
from .models import CapabilityError, LinearSpan, Singleton, TensorRank, WeightedSparse

POINT = "point"
SOBOLEV = "sobolev"
TENSOR = "tensor"


@dataclass(frozen=True)
class Seminorm:
    """A family ``|.|_y`` of seminorms indexed by the sample point ``y``.

    ``point``: ``|v(y)|``.  ``sobolev``: ``(sum_{k<=order} |v^(k)(y)|^2)^(1/2)``.
    ``tensor``: ``|(v, y)_Fro|`` for arrays ``v`` and ``y``.
    """

    kind: str = POINT
    order: int = 0

    def __post_init__(self):
        if self.kind not in (POINT, SOBOLEV, TENSOR):
            raise ValueError(f"unknown seminorm kind {self.kind!r}")
        if self.kind == POINT and self.order != 0:
            raise ValueError("point seminorm has order 0")
        if self.order < 0:
            raise ValueError("order must be nonnegative")

    @property
    def height(self) -> int:
        """Number of stacked linear functionals per sample point."""
        return self.order + 1 if self.kind == SOBOLEV else 1

    def stack(self, basis: BasisFamily, y) -> np.ndarray:
        """Functionals applied to each basis function: shape ``shape(y) + (height, size)``."""
        if self.kind == TENSOR:
            raise CapabilityError("tensor seminorm has no basis stack")
        d = eval_basis_derivatives(basis, y, self.height - 1)
        return np.moveaxis(d, 0, -2)

    def __call__(self, v, y) -> np.ndarray:
        """``|v|_y`` for an expansion (vectorized over ``y``) or a tensor pair."""
        if self.kind == TENSOR:
            return np.abs(np.tensordot(np.asarray(v), np.asarray(y), axes=np.ndim(v)))
        vals = self.stack(v.basis, y) @ v.coefficients
        return np.sqrt(np.sum(vals**2, axis=-1))


def point_value() -> Seminorm:
    return Seminorm(POINT)


def sobolev_stack(order: int) -> Seminorm:
    return Seminorm(SOBOLEV, order)


def tensor_pairing() -> Seminorm:
    return Seminorm(TENSOR)


@dataclass(frozen=True)
class EmpiricalDesign:
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    seminorm: Seminorm = field(default_factory=point_value)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("a design needs at least one point")
        if wts.shape != pts.shape:
            raise ValueError("need one weight per point")
        if np.any(wts <= 0) or not np.all(np.isfinite(wts)):
            raise ValueError("design weights must be positive and finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    @property
    def n(self) -> int:
        return self.points.size

    @classmethod
    def draw(cls, measure, n: int, seed=None, seminorm: Optional[Seminorm] = None):
        y, w = measure.sample(n, seed)
        return cls(y, w, seminorm or point_value())


def gram_matrix(basis: BasisFamily, seminorm: Seminorm, rule: Optional[QuadratureRule] = None) -> np.ndarray:
    """``(B_i, B_j)`` in the norm induced by ``seminorm`` and the uniform measure."""
    if rule is None:
        rule = gauss_quadrature(4 * basis.size + 40, basis.domain)
    S = seminorm.stack(basis, rule.nodes)
    return np.einsum("q,qhi,qhj->ij", rule.weights, S, S)


def true_norm(v: FunctionExpansion, seminorm: Seminorm = None, rule: Optional[QuadratureRule] = None) -> float:
    """``(int |v|_y^2 d rho)^(1/2)`` by quadrature."""
    seminorm = seminorm or point_value()
    if rule is None:
        rule = gauss_quadrature(4 * v.basis.size + 40, v.basis.domain)
    return float(np.sqrt(rule.integrate(lambda y: seminorm(v, y) ** 2)))


def empirical_norm(v, design: EmpiricalDesign) -> float:
    """``((1/n) sum_i w(y_i) |v|_{y_i}^2)^(1/2)``.

    ``v`` is an expansion or a callable returning ``|v|_y`` directly.
    """
    vals = _seminorm_values(v, design)
    return float(np.sqrt(np.mean(design.weights * vals**2)))


def empirical_norm_noisy(v, design: EmpiricalDesign, noise) -> float:
    """Empirical norm with the perturbed seminorm ``|v|_y + eta_y``."""
    noise = np.asarray(noise, dtype=float)
    if noise.shape != (design.n,):
        raise ValueError("need one noise value per design point")
    vals = _seminorm_values(v, design)
    return float(np.sqrt(np.mean(design.weights * (vals + noise) ** 2)))


def _seminorm_values(v, design: EmpiricalDesign) -> np.ndarray:
    if isinstance(v, FunctionExpansion):
        return design.seminorm(v, design.points)
    return np.abs(np.asarray(v(design.points), dtype=float))


def empirical_gram(basis: BasisFamily, design: EmpiricalDesign, indices=None):
    """``G = (1/n) sum_i w(y_i) B(y_i) B(y_i)^T`` and ``||G - I||_2``."""
    if design.seminorm.kind != POINT:
        raise ValueError("the empirical Gram matrix is defined for the point seminorm")
    B = eval_basis(basis, design.points)
    if indices is not None:
        B = B[:, list(indices)]
    G = (B * design.weights[:, None]).T @ B / design.n
    return G, spectral_norm(G - np.eye(G.shape[0]))


def spectral_norm(S: np.ndarray) -> float:
    """Spectral norm of a symmetric matrix."""
    if S.size == 0:
        return 0.0
    ev = np.linalg.eigvalsh(S)
    return float(max(abs(ev[0]), abs(ev[-1])))


def quadrature_error(model, design: EmpiricalDesign) -> float:
    """``sup_{u in U(A)} | ||u||^2 - ||u||_n^2 |``, computed exactly.

    Linear spans reduce to an eigenvalue problem, weighted-sparse classes to
    one eigenvalue problem per maximal admissible support, singletons to a
    direct evaluation.
    """
    if isinstance(model, Singleton):
        v = model.v
        if design.seminorm.kind == POINT:
            norm2 = v.l2_norm() ** 2
        else:
            norm2 = true_norm(v, design.seminorm) ** 2
        if norm2 == 0:
            raise ValueError("U({0}) is empty")
        return abs(1.0 - empirical_norm(v, design) ** 2 / norm2)
    if isinstance(model, LinearSpan):
        if design.seminorm.kind == POINT:
            return empirical_gram(model.basis, design, model.indices)[1]
        S = design.seminorm.stack(model.basis, design.points)[..., list(model.indices)]
        Gn = np.einsum("q,qhi,qhj->ij", design.weights, S, S) / design.n
        G = gram_matrix(model.basis, design.seminorm)[np.ix_(model.indices, model.indices)]
        L = np.linalg.cholesky(G)
        Linv = np.linalg.inv(L)
        return spectral_norm(Linv @ Gn @ Linv.T - np.eye(len(model.indices)))
    if isinstance(model, WeightedSparse):
        if design.seminorm.kind != POINT:
            raise CapabilityError("sparse certification implemented for the point seminorm only")
        G, _ = empirical_gram(model.basis, design)
        D = G - np.eye(G.shape[0])
        best = 0.0
        for S in model.supports():
            best = max(best, spectral_norm(D[np.ix_(S, S)]))
        return best
    raise CapabilityError(f"no exact quadrature error for {type(model).__name__}")


def rip_holds(model, design: EmpiricalDesign, delta: float) -> bool:
    """``(1 - delta) ||u||^2 <= ||u||_n^2 <= (1 + delta) ||u||^2`` for all ``u`` in the model."""
    return quadrature_error(model, design) <= delta


@dataclass(frozen=True)
class VariationConstant:
    value: float
    exact: bool
    bounded: bool = True


def variation_constant(model, weight: Optional[Callable] = None, *, unbounded_support: bool = False) -> VariationConstant:
    """``K(U(A)) = ||w bhat||_inf`` evaluated on a refined Chebyshev grid.

    ``exact`` is False when ``bhat`` is only an upper bound.  Tensor classes
    sampled from a measure with unbounded support have ``K = inf``.
    """
    if isinstance(model, TensorRank):
        if unbounded_support:
            return VariationConstant(np.inf, True, bounded=False)
        raise CapabilityError("tensor variation constants come from the rank-1 check")

    def f(y):
        b = np.asarray(model.bhat(y), dtype=float)
        if weight is None:
            return b
        w = np.asarray(weight(y), dtype=float)
        return np.where(b > 0, w * b, 0.0)

    value = grid_sup(f, model.basis.domain)
    return VariationConstant(value, bool(model.bhat_is_exact))


def weighted_sup_norm(v: FunctionExpansion, weight: Optional[Callable] = None, seminorm: Seminorm = None) -> float:
    """``||v||_{w,inf} = sup_y sqrt(w(y)) |v|_y``."""
    seminorm = seminorm or point_value()

    def f(y):
        val = seminorm(v, y) ** 2
        return val * weight(y) if weight is not None else val

    return float(np.sqrt(grid_sup(f, v.basis.domain)))

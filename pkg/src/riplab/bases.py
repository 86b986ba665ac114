"""Orthonormal function systems on a closed interval.

Both families are orthonormal with respect to the uniform probability
measure ``dx / (b - a)`` on ``[a, b]``.  All recurrences run on the
reference interval ``[-1, 1]``; derivatives pick up the chain-rule factor
``(2 / (b - a))**k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

LEGENDRE = "legendre"
TRIGONOMETRIC = "trigonometric"
_KINDS = (LEGENDRE, TRIGONOMETRIC)

SUP_GRID_SIZE = 4096


class DomainError(ValueError):
    """Raised when an evaluation point lies outside the basis domain."""


@dataclass(frozen=True)
class BasisFamily:
    """The first ``size`` functions of an orthonormal family on ``domain``.

    The trigonometric family is the real system
    ``1, sqrt(2) cos(pi t), sqrt(2) sin(pi t), sqrt(2) cos(2 pi t), ...``
    in the reference variable ``t``.
    """

    kind: str
    size: int
    domain: tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("basis size must be positive")
        a, b = self.domain
        if not b > a:
            raise ValueError(f"degenerate domain {self.domain}")
        object.__setattr__(self, "domain", (float(a), float(b)))

    @property
    def scale(self) -> float:
        """d t / d y for the affine map onto [-1, 1]."""
        a, b = self.domain
        return 2.0 / (b - a)

    def to_reference(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        a, b = self.domain
        slack = 1e-12 * (b - a)
        if np.any(y < a - slack) or np.any(y > b + slack) or np.any(np.isnan(y)):
            raise DomainError(f"points outside domain [{a}, {b}]")
        t = (2.0 * y - (a + b)) / (b - a)
        return np.clip(t, -1.0, 1.0)

    def __call__(self, y) -> np.ndarray:
        return eval_basis(self, y)

    def derivatives(self, y, order: int) -> np.ndarray:
        return eval_basis_derivatives(self, y, order)


def legendre(size: int, domain=(-1.0, 1.0)) -> BasisFamily:
    return BasisFamily(LEGENDRE, size, domain)


def trigonometric(size: int, domain=(-1.0, 1.0)) -> BasisFamily:
    return BasisFamily(TRIGONOMETRIC, size, domain)


def _legendre_derivatives(t: np.ndarray, size: int, order: int) -> np.ndarray:
    # Differentiating (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1} k times gives
    # (j+1) P_{j+1}^(k) = (2j+1) (t P_j^(k) + k P_j^(k-1)) - j P_{j-1}^(k).
    out = np.zeros((order + 1,) + t.shape + (size,))
    out[0, ..., 0] = 1.0
    if size > 1:
        out[0, ..., 1] = t
        if order >= 1:
            out[1, ..., 1] = 1.0
    for j in range(1, size - 1):
        for k in range(order + 1):
            prev = out[k - 1, ..., j] if k > 0 else 0.0
            out[k, ..., j + 1] = (
                (2 * j + 1) * (t * out[k, ..., j] + k * prev) - j * out[k, ..., j - 1]
            ) / (j + 1)
    out *= np.sqrt(2.0 * np.arange(size) + 1.0)
    return out


def _trigonometric_derivatives(t: np.ndarray, size: int, order: int) -> np.ndarray:
    out = np.zeros((order + 1,) + t.shape + (size,))
    out[0, ..., 0] = 1.0
    for j in range(1, size):
        freq = np.pi * ((j + 1) // 2)
        # cos at odd positions, sin at even ones; d^k shifts the phase by k pi/2
        phase = 0.0 if j % 2 == 1 else -np.pi / 2
        for k in range(order + 1):
            out[k, ..., j] = np.sqrt(2.0) * freq**k * np.cos(freq * t + phase + k * np.pi / 2)
    return out


def eval_basis_derivatives(basis: BasisFamily, y, order: int) -> np.ndarray:
    """Derivatives ``D^k B_j(y)`` for ``k = 0..order``.

    Returns an array of shape ``(order + 1,) + shape(y) + (size,)``.
    """
    if order < 0:
        raise ValueError("derivative order must be nonnegative")
    t = basis.to_reference(y)
    if basis.kind == LEGENDRE:
        out = _legendre_derivatives(t, basis.size, order)
    else:
        out = _trigonometric_derivatives(t, basis.size, order)
    chain = basis.scale ** np.arange(order + 1)
    return out * chain.reshape((order + 1,) + (1,) * (out.ndim - 1))


def eval_basis(basis: BasisFamily, y) -> np.ndarray:
    """Values ``(B_1(y), ..., B_m(y))``, shape ``shape(y) + (size,)``."""
    return eval_basis_derivatives(basis, y, 0)[0]


def chebyshev_grid(domain, size: int = SUP_GRID_SIZE) -> np.ndarray:
    """Chebyshev-Lobatto points on ``domain``, endpoints included, ascending."""
    a, b = domain
    t = -np.cos(np.pi * np.arange(size) / (size - 1))
    return 0.5 * (a + b) + 0.5 * (b - a) * t


def golden_section_max(f: Callable, lo: float, hi: float, tol: float = 1e-12, maxiter: int = 200):
    """Maximize a unimodal scalar function on ``[lo, hi]``."""
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def grid_sup(f: Callable, domain, size: int = SUP_GRID_SIZE, refine: int = 8) -> float:
    """Supremum of a vectorized nonnegative function on ``domain``.

    Evaluates on a Chebyshev grid and polishes the ``refine`` largest local
    grid maxima by golden-section search on the neighbouring cells.
    """
    grid = chebyshev_grid(domain, size)
    vals = np.asarray(f(grid), dtype=float)
    best = float(np.max(vals))
    interior = np.flatnonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])) + 1
    if interior.size:
        top = interior[np.argsort(vals[interior])[::-1][:refine]]
        scalar = lambda x: float(np.asarray(f(np.array([x])))[0])
        for i in top:
            _, fx = golden_section_max(scalar, grid[i - 1], grid[i + 1])
            best = max(best, fx)
    return best


def basis_sup_norm(basis: BasisFamily, j: int, weight: Optional[Callable] = None) -> float:
    """Weighted sup-norm ``sup_y sqrt(w(y)) |B_j(y)|`` of the ``j``-th (0-based) function."""
    if not 0 <= j < basis.size:
        raise IndexError(f"basis index {j} out of range for size {basis.size}")
    sub = BasisFamily(basis.kind, j + 1, basis.domain)

    def f(y):
        val = eval_basis(sub, y)[..., j] ** 2
        if weight is not None:
            val = val * weight(y)
        return val

    return float(np.sqrt(grid_sup(f, basis.domain)))


def sup_norms(basis: BasisFamily, weight: Optional[Callable] = None) -> np.ndarray:
    """``basis_sup_norm`` for every function of the family."""
    grid = chebyshev_grid(basis.domain)
    vals = eval_basis(basis, grid) ** 2
    if weight is not None:
        vals = vals * weight(grid)[:, None]
    out = np.empty(basis.size)
    for j in range(basis.size):
        col = vals[:, j]
        best = float(col.max())
        idx = np.flatnonzero((col[1:-1] >= col[:-2]) & (col[1:-1] >= col[2:])) + 1
        if idx.size:
            top = idx[np.argsort(col[idx])[::-1][:4]]
            sub = BasisFamily(basis.kind, j + 1, basis.domain)

            def f(x, j=j, sub=sub):
                v = eval_basis(sub, np.array([x]))[0, j] ** 2
                return float(v * weight(np.array([x]))[0]) if weight is not None else float(v)

            for i in top:
                best = max(best, golden_section_max(f, grid[i - 1], grid[i + 1])[1])
        out[j] = np.sqrt(best)
    return out


@dataclass(frozen=True)
class FunctionExpansion:
    """``sum_j c_j B_j`` for a basis family and coefficient vector."""

    basis: BasisFamily
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float).copy()
        if c.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __call__(self, y) -> np.ndarray:
        return eval_basis(self.basis, y) @ self.coefficients

    def derivatives(self, y, order: int) -> np.ndarray:
        """Shape ``(order + 1,) + shape(y)``."""
        return eval_basis_derivatives(self.basis, y, order) @ self.coefficients

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def __add__(self, other: "FunctionExpansion") -> "FunctionExpansion":
        if other.basis != self.basis:
            raise ValueError("cannot add expansions in different bases")
        return FunctionExpansion(self.basis, self.coefficients + other.coefficients)

    def __neg__(self) -> "FunctionExpansion":
        return FunctionExpansion(self.basis, -self.coefficients)

    def __sub__(self, other: "FunctionExpansion") -> "FunctionExpansion":
        return self + (-other)

    def __mul__(self, alpha: float) -> "FunctionExpansion":
        return FunctionExpansion(self.basis, alpha * self.coefficients)

    __rmul__ = __mul__


def unit_vector(basis: BasisFamily, j: int) -> FunctionExpansion:
    c = np.zeros(basis.size)
    c[j] = 1.0
    return FunctionExpansion(basis, c)

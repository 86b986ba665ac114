"""Weighted probability measures, optimal weights and inverse-CDF sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

CDF_GRID_SIZE = 8192
_PANEL_NODES = 16


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integrals against the uniform probability measure."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness: int

    def integrate(self, f: Callable) -> float:
        return float(np.asarray(f(self.nodes)) @ self.weights)


def gauss_quadrature(degree_exactness: int, domain=(-1.0, 1.0)) -> QuadratureRule:
    """Gauss-Legendre rule exact for polynomials of degree ``degree_exactness``."""
    if degree_exactness < 1:
        raise ValueError("degree of exactness must be at least 1")
    npts = int(np.ceil((degree_exactness + 1) / 2))
    t, wt = np.polynomial.legendre.leggauss(npts)
    a, b = domain
    return QuadratureRule(0.5 * (a + b) + 0.5 * (b - a) * t, wt / 2.0, 2 * npts - 1)


def _panel_rule(domain, panels: int):
    """Composite Gauss rule on Chebyshev-spaced panels.

    Returns the panel edges, nodes with shape (panels, q) and matching
    Lebesgue weights.
    """
    a, b = domain
    edges = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * np.arange(panels + 1) / panels)
    edges[0], edges[-1] = a, b
    t, wt = np.polynomial.legendre.leggauss(_PANEL_NODES)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    return edges, mid + half * t, half * wt


@dataclass(frozen=True)
class WeightedMeasure:
    """Reference density ``rho`` with a weight ``w`` such that ``int w^-1 d rho = 1``.

    Samples are drawn from the density ``w^-1 rho`` by inverting a tabulated
    CDF.  ``sampling_density`` is kept explicitly so that ``w`` may be
    infinite where the sampling density vanishes.
    """

    domain: tuple[float, float]
    rho_density: Callable = field(repr=False)
    weight: Callable = field(repr=False)
    sampling_density: Callable = field(repr=False)
    cdf_nodes: np.ndarray = field(repr=False)
    cdf_values: np.ndarray = field(repr=False)

    def cdf(self, y) -> np.ndarray:
        return np.interp(y, self.cdf_nodes, self.cdf_values)

    def inverse_cdf(self, q) -> np.ndarray:
        # the CDF may be flat where the density vanishes; np.interp handles ties
        return np.interp(q, self.cdf_values, self.cdf_nodes)

    def normalization(self) -> float:
        """``int w^-1 d rho``, evaluated with the tabulation rule."""
        _, nodes, wts = _panel_rule(self.domain, CDF_GRID_SIZE)
        return float(np.sum(self.sampling_density(nodes) * wts))

    def sample(self, n: int, seed=None):
        return sample(self, n, seed)


def _build(domain, rho_density, weight, sampling_density) -> WeightedMeasure:
    edges, nodes, wts = _panel_rule(domain, CDF_GRID_SIZE)
    mass = np.sum(sampling_density(nodes) * wts, axis=1)
    cdf = np.concatenate([[0.0], np.cumsum(mass)])
    return WeightedMeasure(
        (float(domain[0]), float(domain[1])), rho_density, weight, sampling_density, edges, cdf
    )


def uniform_density(domain) -> Callable:
    a, b = domain
    return lambda y: np.full(np.shape(y), 1.0 / (b - a))


def make_uniform(domain=(-1.0, 1.0)) -> WeightedMeasure:
    """Uniform probability measure with ``w = 1``."""
    a, b = (float(x) for x in domain)
    if not b > a:
        raise ValueError(f"degenerate interval {domain}")
    rho = uniform_density((a, b))
    return _build((a, b), rho, lambda y: np.ones(np.shape(y)), rho)


def integrate_density(f: Callable, domain, rho_density: Optional[Callable] = None) -> float:
    """``int f d rho`` by the composite rule used for the CDF tabulation."""
    rho = rho_density or uniform_density(domain)
    _, nodes, wts = _panel_rule(domain, CDF_GRID_SIZE)
    return float(np.sum(f(nodes) * rho(nodes) * wts))


def optimal_weight(bhat: Callable, domain=(-1.0, 1.0), rho_density: Optional[Callable] = None,
                   bhat_norm: Optional[float] = None) -> WeightedMeasure:
    """Weight ``w = ||bhat||_{L1(rho)} / bhat`` minimizing ``||w bhat||_inf``.

    ``bhat_norm`` may be passed when ``||bhat||_{L1(rho)}`` is known
    analytically; otherwise it is integrated numerically.  Where ``bhat``
    vanishes the weight is infinite but the sampling density is zero, so
    sampled points never see it.
    """
    rho = rho_density or uniform_density(domain)
    norm = integrate_density(bhat, domain, rho) if bhat_norm is None else float(bhat_norm)
    if not norm > 0 or not np.isfinite(norm):
        raise ValueError("bhat must have positive, finite L1(rho) norm")

    def weight(y):
        b = np.asarray(bhat(y), dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(b > 0, norm / np.where(b > 0, b, 1.0), np.inf)

    def density(y):
        return np.asarray(bhat(y), dtype=float) * rho(y) / norm

    measure = _build(domain, rho, weight, density)
    # renormalize the tabulated CDF so it ends at exactly one
    total = measure.cdf_values[-1]
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"sampling density integrates to {total}, not 1")
    object.__setattr__(measure, "cdf_values", measure.cdf_values / total)
    return measure


def sample(measure: WeightedMeasure, n: int, seed=None):
    """Draw ``n`` i.i.d. points from ``w^-1 rho``; returns ``(points, w(points))``."""
    if n < 1:
        raise ValueError("sample size must be positive")
    rng = np.random.default_rng(seed)
    y = measure.inverse_cdf(rng.random(n))
    return y, np.asarray(measure.weight(y), dtype=float)


def child_seed(master: int, index: int) -> np.random.SeedSequence:
    """Independent seed for repetition ``index`` of a run seeded by ``master``."""
    return np.random.SeedSequence([int(master), int(index)])

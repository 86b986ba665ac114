"""Closed-form sample-complexity and tail bounds, and the Sobolev constants.

Every calculator returns a plain float; :func:`evaluate` wraps them in a
:class:`BoundResult` for reporting.  Tail bounds are returned unclamped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .bases import BasisFamily
from .measure import QuadratureRule
from .norms import Seminorm, gram_matrix


def _check_unit(name: str, x: float) -> None:
    if not 0 < x < 1:
        raise ValueError(f"{name} must lie in (0, 1), got {x}")


def sample_complexity_general(M: float, c: float, C: float, K: float, delta: float, p: float) -> float:
    """Samples sufficient for RIP with probability ``1 - p``.

    Assumes a covering bound ``C (c r)^-M`` and variation constant ``K``.
    """
    _check_unit("delta", delta)
    _check_unit("p", p)
    if K <= 0 or c <= 0 or C <= 0 or M <= 0:
        raise ValueError("M, c, C and K must be positive")
    arg = 4.0 * math.sqrt(K) / (c * delta)
    if arg <= 1:
        raise ValueError("log argument 4 sqrt(K) / (c delta) must exceed 1")
    return 2.0 * (M * math.log(arg) - math.log(p / (2.0 * C))) * (K / delta) ** 2


def sample_complexity_linear(m: int, delta: float, p: float) -> float:
    """Linear space of dimension ``m`` under the optimal weight (``K = m``)."""
    if m < 1:
        raise ValueError("dimension must be positive")
    _check_unit("delta", delta)
    _check_unit("p", p)
    return 2.0 * (m * math.log(8.0 * m**1.5 / delta) - math.log(p / 2.0)) * (m / delta) ** 2


def sample_complexity_sparse(m: int, s: float, delta: float, p: float, C: Optional[float] = None) -> float:
    """Weighted-sparse class, up to an unspecified multiplicative constant.

    With ``C`` given, the ``ln m`` term becomes ``ln(C m)``.
    """
    if s < 1 or m < 1:
        raise ValueError("need s >= 1 and m >= 1")
    _check_unit("delta", delta)
    _check_unit("p", p)
    mm = m if C is None else C * m
    return s**2 * (s * math.log(mm) - s * math.log(delta) - math.log(1.0 - p)) / delta**2


def sparse_variation_bound(s: float, omega_max: float) -> float:
    """``K <= s omega_max^2`` for standard sparsity expressed as a weighted class."""
    return s * omega_max**2


def sample_complexity_tensor(m: int, order: int, rank: int, delta: float, p: float,
                             regime: str = "rank1", k: Optional[float] = None) -> float:
    """HT-rank tensors; ``regime`` is ``rank1`` (``k^2 = m^order``) or ``gaussian_k``.

    In the Gaussian regime ``k`` defaults to ``m^(order/2)``.
    """
    _check_unit("delta", delta)
    _check_unit("p", p)
    if regime == "rank1":
        if k is not None:
            raise ValueError("k is fixed to m^(order/2) in the rank-1 regime")
        k = m ** (order / 2.0)
    elif regime == "gaussian_k":
        k = m ** (order / 2.0) if k is None else float(k)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    if k <= 0:
        raise ValueError("k must be positive")
    exponent = order * rank**3 + order * m * rank
    log_term = math.log(3.0 * (2 * order - 1) * math.sqrt(rank) * k / delta)
    return 2.0 * (exponent * log_term - math.log(p / 2.0)) * (k * k / delta) ** 2


def c_delta(delta: float) -> float:
    return -delta + (1.0 + delta) * math.log1p(delta)


def cm_gram_tail(m: int, K_tilde: float, delta: float, n: float) -> float:
    """``2 m exp(-c_delta n / K)`` bounding ``P(||G - I||_2 > delta)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return 2.0 * m * math.exp(-c_delta(delta) * n / K_tilde)


def hoeffding_tail(K: float, delta: float, n: float) -> float:
    """``2 exp(-n delta^2 / (2 K^2))``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return 2.0 * math.exp(-n * delta**2 / (2.0 * K**2))


def clamp_probability(x: float) -> float:
    return min(1.0, max(0.0, x))


def kappa_sobolev(M_smooth: float, m: int, d: int = 1) -> float:
    """``(2 sqrt(pi))^-d Gamma(M+1) Gamma(M-m-d/2) / Gamma(M-m)``, via log-Gamma for large ``M``."""
    ell = M_smooth - m
    if ell <= d / 2:
        raise ValueError(f"need M - m > d/2, got M - m = {ell}")
    if M_smooth < 85:  # direct Gamma keeps small cases exact, e.g. kappa(2, 0, 1) = 1/2
        return math.gamma(M_smooth + 1) / (2.0 * math.sqrt(math.pi)) ** d * math.gamma(ell - d / 2) / math.gamma(ell)
    log_k = -d * math.log(2.0 * math.sqrt(math.pi)) + gammaln(M_smooth + 1) + gammaln(ell - d / 2) - gammaln(ell)
    return float(math.exp(log_k))


def radial_integral(d: int, ell: float) -> float:
    """``int_0^inf s^(d-1) / (1 + s^2)^ell ds`` in closed form."""
    if ell <= d / 2:
        raise ValueError("integral diverges for ell <= d/2")
    return float(math.exp(gammaln(ell - d / 2) + gammaln(d / 2) - gammaln(ell)) / 2.0)


def gautschi_bounds(M_smooth: int, m: int):
    """Lower and upper bounds on ``kappa_sobolev(M, m, 1)`` from Gautschi's inequality."""
    pref = math.exp(gammaln(M_smooth + 1)) / (2.0 * math.sqrt(math.pi))
    lower = pref * (M_smooth - m) ** -0.5
    upper = pref * (M_smooth - m - 1) ** -0.5 if M_smooth - m - 1 > 0 else math.inf
    return lower, upper


def lambda_embedding(basis: BasisFamily, norm_seminorm: Seminorm, h_seminorm: Seminorm,
                     rule: Optional[QuadratureRule] = None, indices=None) -> float:
    """``sup ||v||_H / ||v||`` over the span, by a Cholesky-reduced eigenproblem."""
    G_norm = gram_matrix(basis, norm_seminorm, rule)
    G_h = gram_matrix(basis, h_seminorm, rule)
    if indices is not None:
        ix = np.ix_(list(indices), list(indices))
        G_norm, G_h = G_norm[ix], G_h[ix]
    try:
        ev = scipy.linalg.eigh(G_h, G_norm, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise ValueError("Gram matrix of the approximation norm is singular") from exc
    return float(np.sqrt(ev[-1]))


def indicator_threshold(n: float) -> float:
    """``4 (1 + n^-1/2)``: multiplicative error level signalling that RIP holds."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 4.0 * (1.0 + n**-0.5)


@dataclass
class BoundResult:
    """A calculator output.  ``value`` is what gets reported (tail bounds
    clamped to ``[0, 1]``); ``raw`` is the unclamped closed form."""

    bound: str
    value: float
    inputs: dict = field(default_factory=dict)
    note: str = ""
    raw: Optional[float] = None

    def to_dict(self) -> dict:
        raw = self.value if self.raw is None else self.raw
        return {"bound": self.bound, "inputs": self.inputs, "note": self.note, "raw": raw, "value": self.value}


def _c_delta_bound(delta: float) -> float:
    return c_delta(delta)


_NOTE_SPARSE = "up to an implicit constant"
_NOTE_TAIL = "probability bound clamped to [0, 1]"
TAIL_BOUNDS = ("cm-gram", "hoeffding")

BOUNDS: dict[str, tuple[Callable, dict, str]] = {
    "general": (sample_complexity_general, {"M": float, "c": float, "C": float, "K": float, "delta": float, "p": float}, ""),
    "linear": (sample_complexity_linear, {"m": int, "delta": float, "p": float}, ""),
    "sparse": (sample_complexity_sparse, {"m": int, "s": float, "delta": float, "p": float, "C": float}, _NOTE_SPARSE),
    "tensor": (sample_complexity_tensor, {"m": int, "order": int, "rank": int, "delta": float, "p": float, "regime": str, "k": float}, ""),
    "cm-gram": (cm_gram_tail, {"m": int, "K_tilde": float, "delta": float, "n": float}, _NOTE_TAIL),
    "c-delta": (_c_delta_bound, {"delta": float}, ""),
    "hoeffding": (hoeffding_tail, {"K": float, "delta": float, "n": float}, _NOTE_TAIL),
    "kappa": (kappa_sobolev, {"M": float, "m": int, "d": int}, ""),
    "indicator": (indicator_threshold, {"n": float}, ""),
    "radial": (radial_integral, {"d": int, "ell": float}, ""),
}


def evaluate(bound: str, **params) -> BoundResult:
    """Evaluate a calculator by id with string or numeric parameters."""
    if bound not in BOUNDS:
        raise KeyError(f"unknown bound {bound!r}; choose from {sorted(BOUNDS)}")
    fn, schema, note = BOUNDS[bound]
    unknown = set(params) - set(schema)
    if unknown:
        raise ValueError(f"unknown parameters for {bound}: {sorted(unknown)}")
    typed = {}
    for key, raw in params.items():
        conv = schema[key]
        typed[key] = conv(float(raw)) if conv is int and isinstance(raw, str) and "." in raw else conv(raw)
    args = dict(typed)
    if bound == "kappa":
        args = {"M_smooth": typed["M"], "m": typed["m"], "d": typed.get("d", 1)}
    raw = float(fn(**args))
    value = clamp_probability(raw) if bound in TAIL_BOUNDS else raw
    return BoundResult(bound, value, typed, note, raw)

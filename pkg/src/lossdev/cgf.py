"""Per-class moment generating functions and mixture cumulant generating
functions, with analytic first and second derivatives.

All MGF sums are evaluated with the max exponent shifted out, so tilts
up to |lambda| ~ 700 / c0 are safe; derivatives come from the same
shifted weights, never from differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import LossClass, PortfolioModel


@dataclass(frozen=True)
class CgfPoint:
    """One evaluation of a cumulant generating function: value and its
    first two derivatives at ``lam``."""

    lam: float
    value: float
    d1: float
    d2: float


def _log_mgf_terms(cls: LossClass, lam: float) -> tuple[float, float, float]:
    """(log phi(lam), phi'/phi, phi''/phi - (phi'/phi)^2) via shifted exponentials."""
    v = np.asarray(cls.support)
    logp = np.log(cls.probs)
    expo = lam * v + logp
    m = float(expo.max())
    w = np.exp(expo - m)
    s = float(w.sum())
    logphi = m + math.log(s)
    mean = float((w @ v) / s)          # tilted mean = phi'/phi
    var = float((w @ (v - mean) ** 2) / s)  # tilted variance = (log phi)''
    return logphi, mean, var


def class_mgf(cls: LossClass, lam: float) -> float:
    """Moment generating function phi(lam) = sum_j p_j exp(lam v_j)."""
    logphi, _, _ = _log_mgf_terms(cls, lam)
    return math.exp(logphi)


def class_log_mgf(cls: LossClass, lam: float) -> float:
    """log phi(lam), overflow-safe."""
    return _log_mgf_terms(cls, lam)[0]


def mixture_cgf(classes, weights, lam: float) -> CgfPoint:
    """Weighted mixture CGF sum_i w_i log phi_i(lam) with derivatives."""
    value = d1 = d2 = 0.0
    for cls, w in zip(classes, weights):
        if w == 0.0:
            continue
        logphi, mean, var = _log_mgf_terms(cls, lam)
        value += w * logphi
        d1 += w * mean
        d2 += w * var
    return CgfPoint(lam, value, d1, d2)


def limit_cgf(model: PortfolioModel, lam: float) -> CgfPoint:
    """Limit CGF of a weighted model: sum_i d_i log phi_i(lam)."""
    if not model.is_weighted:
        raise ValueError("limit_cgf needs a weighted model; use empirical_cgf for assigned ones")
    return mixture_cgf(model.classes, model.densities(), lam)


def empirical_cgf(model: PortfolioModel, n: int, lam: float) -> CgfPoint:
    """Finite-n average CGF (1/n) sum_{k<=n} log phi_{class(k)}(lam),
    i.e. the mixture CGF with weights nu_i(n)/n.

    Works for assigned models (rule counts) and for weighted models
    realized by deterministic apportionment.
    """
    counts = model.counts(n)
    return mixture_cgf(model.classes, counts / n, lam)


def cumulants(cls: LossClass, order: int = 6) -> list[float]:
    """Cumulants kappa_1..kappa_order from raw moments by the standard
    moment-to-cumulant recursion.  Capped at order 6; higher orders are
    not used by any estimate here."""
    if not 1 <= order <= 6:
        raise ValueError("order must be between 1 and 6")
    m = [cls.moment(j) for j in range(order + 1)]  # m[0] = 1
    kappa = [0.0] * (order + 1)
    for r in range(1, order + 1):
        acc = m[r]
        for k in range(1, r):
            acc -= math.comb(r - 1, k - 1) * kappa[k] * m[r - k]
        kappa[r] = acc
    return kappa[1:]

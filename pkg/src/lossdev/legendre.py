"""Fenchel-Legendre transforms of mixture CGFs, closed-form rate
functions for the symmetric two-point classes, and the empirical
tail-decay lower bound for assigned (density-oscillating) models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .cgf import mixture_cgf
from .model import PortfolioModel

SOLVE_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class RatePoint:
    """Legendre-transform solution at threshold x.

    status is 'interior' (lambda_star solves Lambda'(lam) = x),
    'boundary' (x at the essential supremum of the mean; the supremum is
    attained only as lambda -> inf and the rate is the closed-form limit
    value), or 'infinite' (x outside the reachable range; rate = inf).
    """

    x: float
    lambda_star: float
    rate: float
    status: str


class SolverError(RuntimeError):
    """Root-finder failed to converge (should not happen: the CGF
    derivative is smooth and strictly increasing)."""


def _solve_mean_equation(classes, weights, x: float) -> tuple[float, float]:
    """Solve d/dlam of the mixture CGF = x.  Newton with a bisection
    safeguard inside a bracket found by doubling lambda."""
    tol = SOLVE_TOL * max(1.0, abs(x))
    lam = 0.0
    d1 = mixture_cgf(classes, weights, lam).d1
    if abs(d1 - x) <= tol:
        return lam, lam * x - mixture_cgf(classes, weights, lam).value
    # bracket by doubling
    step = 1.0 if x > d1 else -1.0
    lo, hi = 0.0, step
    while True:
        p = mixture_cgf(classes, weights, hi)
        if (p.d1 - x) * step >= 0:
            break
        lo, hi = hi, hi * 2
        if abs(hi) > 1e9:
            raise SolverError(f"could not bracket lambda for x={x}")
    if step < 0:
        lo, hi = hi, lo
    lam = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        p = mixture_cgf(classes, weights, lam)
        f = p.d1 - x
        if abs(f) <= tol:
            return lam, lam * x - p.value
        if f > 0:
            hi = lam
        else:
            lo = lam
        lam_new = lam - f / p.d2 if p.d2 > 0 else lam
        if not (lo < lam_new < hi):
            lam_new = 0.5 * (lo + hi)  # bisection safeguard
        lam = lam_new
    raise SolverError(f"no convergence after {MAX_ITER} iterations at x={x}")


def transform_from_weights(classes, weights, x: float) -> RatePoint:
    """Legendre transform of the mixture CGF with the given class weights."""
    weights = np.asarray(weights, dtype=float)
    x_max = float(sum(w * c.max_support for c, w in zip(classes, weights)))
    x_min = float(sum(w * c.min_support for c, w in zip(classes, weights)))
    edge_tol = 1e-12 * max(1.0, abs(x_max), abs(x_min))
    if x > x_max + edge_tol or x < x_min - edge_tol:
        return RatePoint(x, math.inf if x > x_max else -math.inf, math.inf, "infinite")
    if abs(x - x_max) <= edge_tol or abs(x - x_min) <= edge_tol:
        # sup attained only as lambda -> +-inf; limit value in closed form
        upper = abs(x - x_max) <= edge_tol
        rate = -sum(w * math.log(cls.probs[-1] if upper else cls.probs[0])
                    for cls, w in zip(classes, weights) if w > 0.0)
        return RatePoint(x, math.inf if upper else -math.inf, rate, "boundary")
    lam, rate = _solve_mean_equation(classes, weights, x)
    return RatePoint(x, lam, max(rate, 0.0), "interior")


def legendre_transform(model: PortfolioModel, x: float) -> RatePoint:
    """Rate function Lambda*(x) = sup_lam (lam x - Lambda(lam)) of a
    weighted model's limit CGF."""
    if not model.is_weighted:
        raise ValueError("legendre_transform needs a weighted model")
    return transform_from_weights(model.classes, model.densities(), x)


def _two_point_rate(x: float, a: float) -> float:
    """Rate function of the symmetric law on {-a, +a} with mass 1/2 each:
    log 2 + ((x+a)/2a) log((x+a)/2a) + ((a-x)/2a) log((a-x)/2a) on [-a, a],
    with 0 log 0 := 0; infinity otherwise."""
    if abs(x) > a:
        return math.inf
    out = math.log(2.0)
    for t in ((x + a) / (2 * a), (a - x) / (2 * a)):
        if t > 0.0:
            out += t * math.log(t)
    return out


def rate_I1(x: float) -> float:
    """Closed-form rate function of the +-1 symmetric class."""
    return _two_point_rate(x, 1.0)


def rate_I2(x: float) -> float:
    """Closed-form rate function of the +-2 symmetric class."""
    return _two_point_rate(x, 2.0)


def rate_upper_bound(model: PortfolioModel, x: float,
                     lam_grid: Sequence[float],
                     checkpoints: Iterable[int]) -> float:
    """Grid estimate of the exponential tail-decay lower bound for an
    assigned model.

    The running-sup CGF is approximated by the max over ``checkpoints``
    of the finite-n empirical CGF; the returned sup over the lambda grid
    of (lam x - max_n empirical_cgf(n, lam)) is a certified lower bound
    on the decay rate (both approximations err in the safe direction for
    an upper probability bound).  Strictly positive for x > 0 whenever
    the boundedness/variance-floor assumptions hold.
    """
    from .cgf import empirical_cgf

    lam_grid = np.asarray(list(lam_grid), dtype=float)
    if lam_grid.size == 0:
        raise ValueError("empty lambda grid")
    ns = list(checkpoints)
    if not ns:
        raise ValueError("empty checkpoint list")
    best = -math.inf
    for lam in lam_grid:
        bar = max(empirical_cgf(model, n, float(lam)).value for n in ns)
        best = max(best, float(lam) * x - bar)
    return best


# Taylor polynomials of the two closed-form rate functions at 0
_P6_COEFFS = {1: (0.5, 1.0 / 12.0, 1.0 / 30.0),
              2: (1.0 / 8.0, 1.0 / 192.0, 1.0 / 1920.0)}


def rate_expansion_check(which: int, xs: Sequence[float]) -> float:
    """Max over the grid of |I(x) - P6(x)| / x^8, where P6 is the
    degree-6 even Taylor polynomial.  Bounded as the grid refines to 0."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    c2, c4, c6 = _P6_COEFFS[which]
    rate = rate_I1 if which == 1 else rate_I2
    worst = 0.0
    for x in xs:
        if not 0.0 < x <= 0.2:
            raise ValueError("grid must lie in (0, 0.2]")
        p6 = c2 * x**2 + c4 * x**4 + c6 * x**6
        worst = max(worst, abs(rate(x) - p6) / x**8)
    return worst

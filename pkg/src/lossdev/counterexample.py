"""Two-class portfolio with density-oscillating assignment whose tail
probabilities decay at two distinct subsequential exponential rates.

The unit class takes values -1/+1 and the double class -2/+2, each with
probability one half.  Interlaced by an accelerating block schedule, the
density of each class oscillates between 0 and 1; along ends of unit
blocks the exact log-tail rate approaches -I1(x), along ends of double
blocks -I2(x).  Because these differ, no single rate function can govern
the full sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact import MemoryBudgetError, enumerate_tail, exact_log_tail, exact_log_tail_rate
from .legendre import rate_I1, rate_I2, rate_upper_bound, transform_from_weights
from .model import AssumptionBounds, BlockSchedule, LossClass, PortfolioModel

UNIT = LossClass("unit", (-1.0, 1.0), (0.5, 0.5))
DOUBLE = LossClass("double", (-2.0, 2.0), (0.5, 0.5))
BOUNDS = AssumptionBounds(c0=2.0, c1=1.0)

DEFAULT_MAX_N = 5_000_000


def build_counterexample(growth: int = 10, depth: int = 6,
                         a0: int = 1) -> tuple[PortfolioModel, AssumptionBounds]:
    """Portfolio alternating unit and double blocks with accelerating
    lengths a0 * growth**(j(j+1)/2), so each block dwarfs everything
    before it and the class densities approach 0 and 1.

    ``depth`` is the number of blocks laid out before the schedule
    repeats its growth law indefinitely (the rule itself is infinite;
    depth only bounds which block ends the reports inspect).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rule = BlockSchedule(a0=a0, growth=growth, order=(0, 1), accelerating=True)
    model = PortfolioModel((UNIT, DOUBLE), rule=rule)
    return model, BOUNDS


def schedule_depth_end(rule: BlockSchedule, depth: int) -> int:
    """Last contract index covered by the first ``depth`` blocks."""
    return sum(rule.block_length(j) for j in range(depth))


@dataclass(frozen=True)
class SubsequencePoint:
    n: int
    density_unit: float
    log_rate: float


@dataclass(frozen=True)
class SubsequenceReport:
    """Exact log-tail rates along the block ends of one class."""

    x: float
    which: int  # 1 = unit-class ends, 2 = double-class ends
    points: tuple[SubsequencePoint, ...]
    target: float  # -I1(x) or -I2(x); -inf when the rate function is infinite
    gap: float
    partial: bool = False  # True if deeper points hit the memory budget


def subsequence_rates(model: PortfolioModel, x: float, which: int,
                      max_n: int = DEFAULT_MAX_N) -> SubsequenceReport:
    """Exact log-tail rates at ends of class ``which`` blocks up to max_n.

    Block ends are where the other class's density is minimal, so the
    rates approach the pure-class limit.  Points beyond the oracle's
    memory budget truncate the report, flagged as partial.
    """
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    rule = model.rule
    if not isinstance(rule, BlockSchedule):
        raise ValueError("subsequence_rates needs a block-scheduled model")
    ends = rule.block_ends(which - 1, max_n)
    target = -(rate_I1(x) if which == 1 else rate_I2(x))
    points, partial = [], False
    for n in ends:
        try:
            lr = exact_log_tail_rate(model, n, x)
        except MemoryBudgetError:
            partial = True
            break
        counts = model.counts(n)
        points.append(SubsequencePoint(n, counts[0] / n, lr))
    if not points:
        raise ValueError(f"no complete class-{which} block ends at or below n={max_n}")
    gap = abs(points[-1].log_rate - target) if math.isfinite(target) else math.inf
    return SubsequenceReport(x, which, tuple(points), target, gap, partial)


@dataclass(frozen=True)
class SandwichPoint:
    n: int
    log_rate: float
    lower: float        # -I1(x), asymptotic lower bound
    upper: float        # -(finite-n empirical Chernoff rate), exact for every n
    allowance: float    # prefactor allowance log(n)/n * C applied to the lower bound
    lower_ok: bool      # within allowance; small-n misses are prefactor effects
    upper_ok: bool


def sandwich_check(model: PortfolioModel, x: float, ns,
                   allowance_const: float = 5.0) -> list[SandwichPoint]:
    """Per-n check that the exact log-tail rate sits between -I1(x)
    (asymptotic, up to a log(n)/n prefactor allowance) and the finite-n
    Chernoff rate (exact for every n)."""
    if not 0.0 < x < 1.0:
        raise ValueError("the sandwich needs x in (0, 1) so both rate functions are finite")
    out = []
    for n in ns:
        lr = exact_log_tail_rate(model, n, x)
        weights = model.counts(n) / n
        chernoff = transform_from_weights(model.classes, weights, x).rate
        delta = allowance_const * math.log(max(n, 2)) / n
        lower = -rate_I1(x)
        upper = -chernoff
        out.append(SandwichPoint(n, lr, lower, upper, delta,
                                 lower_ok=lr >= lower - delta,
                                 upper_ok=lr <= upper + 1e-12))
    return out


def section_mean_tail(model: PortfolioModel, n: int, which: int, x: float) -> float:
    """Exact P[M_n^(which) > x]: the tail of the average over only the
    class-``which`` contracts among indices 1..n."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    nu = int(model.counts(n)[which - 1])
    if nu < 1:
        raise ValueError(f"no class-{which} contracts among 1..{n}")
    single = PortfolioModel((model.classes[which - 1],), weights=(1.0,))
    return math.exp(exact_log_tail(single, nu, x, inclusive=False))

"""Loss classes, portfolio models, and index-assignment rules.

A portfolio is a sequence of independent contracts; contract k draws its
centered loss from one of finitely many loss classes.  The class of
contract k is given either asymptotically (weights per class) or by an
explicit assignment rule (round-robin cycle or a block schedule whose
class densities oscillate).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PROB_SUM_TOL = 1e-12
CENTER_TOL = 1e-10


class ModelError(ValueError):
    """Malformed model data (parse- or construction-stage)."""


@dataclass(frozen=True)
class LossClass:
    """A bounded finite-support loss distribution for one contract type.

    Support values are centered losses (currency units).  Probabilities
    are validated to sum to one within ``PROB_SUM_TOL`` and then
    renormalized exactly so that repeated convolution does not drift.
    Zero-mass support points are removed at construction.

    Set ``center=True`` to pass raw (uncentered) losses; the constructor
    subtracts the mean.  ``require_centered=False`` skips the mean check
    (used for exponentially tilted laws, which are not centered).
    """

    name: str
    support: tuple[float, ...]
    probs: tuple[float, ...]
    center: bool = False
    require_centered: bool = True

    def __post_init__(self):
        if len(self.support) != len(self.probs) or not self.support:
            raise ModelError(f"class {self.name!r}: support/probs length mismatch or empty")
        sup = np.asarray(self.support, dtype=float)
        pr = np.asarray(self.probs, dtype=float)
        if np.any(pr < 0):
            raise ModelError(f"class {self.name!r}: negative probability")
        keep = pr > 0
        sup, pr = sup[keep], pr[keep]
        if sup.size == 0:
            raise ModelError(f"class {self.name!r}: no support points with positive mass")
        if len(set(sup.tolist())) != sup.size:
            raise ModelError(f"class {self.name!r}: duplicate support values")
        s = pr.sum()
        if abs(s - 1.0) > PROB_SUM_TOL:
            raise ModelError(f"class {self.name!r}: probabilities sum to {s!r}, not 1")
        pr = pr / s
        order = np.argsort(sup)
        sup, pr = sup[order], pr[order]
        if self.center:
            sup = sup - float(sup @ pr)
        mean = float(sup @ pr)
        if self.require_centered and abs(mean) > CENTER_TOL:
            raise ModelError(f"class {self.name!r}: mean {mean!r} is not 0 (use center=True?)")
        if float(((sup - mean) ** 2) @ pr) <= 0.0:
            raise ModelError(f"class {self.name!r}: zero variance")
        object.__setattr__(self, "support", tuple(sup.tolist()))
        object.__setattr__(self, "probs", tuple(pr.tolist()))
        object.__setattr__(self, "center", False)

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    @property
    def variance(self) -> float:
        sup = np.asarray(self.support)
        return float(((sup - self.mean) ** 2) @ np.asarray(self.probs))

    @property
    def max_support(self) -> float:
        return self.support[-1]

    @property
    def min_support(self) -> float:
        return self.support[0]

    def moment(self, order: int) -> float:
        """Raw moment E[X^order]."""
        return float(np.power(self.support, order) @ np.asarray(self.probs))


@dataclass(frozen=True)
class AssumptionBounds:
    """Uniform bound c0 on |X_k| and uniform variance floor c1."""

    c0: float
    c1: float

    def __post_init__(self):
        if not (self.c0 > 0 and self.c1 > 0):
            raise ModelError("bounds c0 and c1 must be strictly positive")
        if self.c1 > self.c0**2:
            raise ModelError("c1 > c0^2 is impossible for variables bounded by c0")


@dataclass(frozen=True)
class RoundRobin:
    """Cyclic assignment: weights (w_1, ..., w_p) expand to a cycle with
    w_i consecutive slots for class i, realizing densities w_i / sum(w)."""

    weights: tuple[int, ...]

    def __post_init__(self):
        if not self.weights or any(w < 0 for w in self.weights) or sum(self.weights) == 0:
            raise ModelError("round-robin weights must be nonnegative with positive sum")
        cycle = []
        for i, w in enumerate(self.weights):
            cycle.extend([i] * int(w))
        object.__setattr__(self, "_cycle", tuple(cycle))

    @property
    def n_classes(self) -> int:
        return len(self.weights)

    @property
    def cycle_length(self) -> int:
        return len(self._cycle)

    def class_of(self, k: int) -> int:
        """Class index of contract k (1-based)."""
        return self._cycle[(k - 1) % len(self._cycle)]

    def counts(self, n: int) -> np.ndarray:
        if n < 1:
            raise ModelError("n must be >= 1")
        full, rem = divmod(n, len(self._cycle))
        out = np.array([full * w for w in self.weights], dtype=np.int64)
        for idx in self._cycle[:rem]:
            out[idx] += 1
        return out

    def densities(self) -> np.ndarray:
        w = np.asarray(self.weights, dtype=float)
        return w / w.sum()


@dataclass(frozen=True)
class BlockSchedule:
    """Assignment in consecutive blocks cycling through ``order``.

    Block j has length a0 * growth**j.  With ``accelerating=True`` the
    length is a0 * growth**(j*(j+1)/2), i.e. the block-to-block ratio
    itself grows by a factor ``growth`` each block; then the density of
    each class oscillates with liminf 0 and limsup 1, which constant
    ratios cannot achieve (they pin the block-end densities near
    growth/(growth+1)).
    """

    a0: int
    growth: int
    order: tuple[int, ...]
    accelerating: bool = False

    def __post_init__(self):
        if self.a0 < 1 or self.growth < 2 or not self.order:
            raise ModelError("block schedule needs a0 >= 1, integer growth >= 2, nonempty order")

    @property
    def n_classes(self) -> int:
        return max(self.order) + 1

    def block_length(self, j: int) -> int:
        if self.accelerating:
            return self.a0 * self.growth ** (j * (j + 1) // 2)
        return self.a0 * self.growth**j

    def blocks_upto(self, n: int) -> list[tuple[int, int, int]]:
        """Blocks (start, end, class) intersecting 1..n, 1-based inclusive."""
        out = []
        start, j = 1, 0
        while start <= n:
            end = start + self.block_length(j) - 1
            out.append((start, min(end, n), self.order[j % len(self.order)]))
            start, j = end + 1, j + 1
        return out

    def block_ends(self, cls: int, n_max: int) -> list[int]:
        """Ends of complete blocks of class ``cls`` not exceeding n_max."""
        return [e for s, e, c in self.blocks_upto(n_max)
                if c == cls and e - s + 1 == self.block_length_at(s)]

    def block_length_at(self, start: int) -> int:
        pos, j = 1, 0
        while pos < start:
            pos += self.block_length(j)
            j += 1
        return self.block_length(j)

    def class_of(self, k: int) -> int:
        for s, e, c in self.blocks_upto(k):
            if s <= k <= e:
                return c
        raise AssertionError("unreachable")

    def counts(self, n: int) -> np.ndarray:
        if n < 1:
            raise ModelError("n must be >= 1")
        out = np.zeros(self.n_classes, dtype=np.int64)
        for s, e, c in self.blocks_upto(n):
            out[c] += e - s + 1
        return out


AssignmentRule = RoundRobin | BlockSchedule


@dataclass(frozen=True)
class PortfolioModel:
    """Loss classes plus either asymptotic class weights or an assignment rule."""

    classes: tuple[LossClass, ...]
    weights: tuple[float, ...] | None = None
    rule: AssignmentRule | None = None

    def __post_init__(self):
        if (self.weights is None) == (self.rule is None):
            raise ModelError("exactly one of weights / rule must be given")
        if self.weights is not None:
            if len(self.weights) != len(self.classes):
                raise ModelError("one weight per class required")
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0) or abs(w.sum() - 1.0) > PROB_SUM_TOL:
                raise ModelError("weights must be nonnegative and sum to 1")
            object.__setattr__(self, "weights", tuple((w / w.sum()).tolist()))
        else:
            if self.rule.n_classes > len(self.classes):
                raise ModelError("assignment rule refers to a class index out of range")

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def counts(self, n: int) -> np.ndarray:
        """Per-class contract counts among indices 1..n.

        Weighted models are realized deterministically by largest-remainder
        apportionment (ties broken by class index), which is consistent with
        any assignment whose densities converge to the weights.
        """
        if self.rule is not None:
            out = self.rule.counts(n)
            if len(out) < len(self.classes):
                out = np.concatenate([out, np.zeros(len(self.classes) - len(out), np.int64)])
            return out
        return apportion(np.asarray(self.weights), n)

    def densities(self) -> np.ndarray:
        if self.weights is None:
            raise ModelError("densities are defined for weighted models only")
        return np.asarray(self.weights, dtype=float)


def apportion(weights: np.ndarray, n: int) -> np.ndarray:
    """Largest-remainder apportionment of n slots to ``weights``."""
    quota = weights * n
    out = np.floor(quota).astype(np.int64)
    rem = n - int(out.sum())
    if rem > 0:
        frac = quota - out
        # stable sort: ties go to the lower class index
        for idx in np.argsort(-frac, kind="stable")[:rem]:
            out[idx] += 1
    return out


@dataclass(frozen=True)
class Violation:
    class_name: str
    clause: str  # one of: centering, bound, variance floor
    detail: str


def validate_model(model: PortfolioModel, bounds: AssumptionBounds) -> list[Violation]:
    """Check every class against the independence-model assumptions.

    Returns an empty list iff every class is centered, bounded by c0, and
    has variance at least c1.  Violations are data, not exceptions.
    """
    out = []
    for cls in model.classes:
        if abs(cls.mean) > CENTER_TOL:
            out.append(Violation(cls.name, "centering", f"mean = {cls.mean!r}"))
        worst = max(abs(cls.min_support), abs(cls.max_support))
        if worst > bounds.c0 * (1 + 1e-12):
            out.append(Violation(cls.name, "bound", f"|support| reaches {worst!r} > c0 = {bounds.c0!r}"))
        if cls.variance < bounds.c1 * (1 - 1e-12):
            out.append(Violation(cls.name, "variance floor",
                                 f"variance {cls.variance!r} < c1 = {bounds.c1!r}"))
    return out


def class_counts(rule: AssignmentRule, n: int) -> np.ndarray:
    """Per-class counts among contract indices 1..n."""
    return rule.counts(n)


@dataclass(frozen=True)
class DensityProfile:
    n: np.ndarray
    density: np.ndarray  # nu_1(n) / n, class index 0
    running_min: float
    running_max: float


def density_profile(rule: AssignmentRule, n_max: int) -> DensityProfile:
    """Density nu_1(n)/n of the first class for n = 1..n_max, with its
    running extremes.  O(n_max) via an assignment indicator array."""
    if n_max < 1:
        raise ModelError("n_max must be >= 1")
    if isinstance(rule, RoundRobin):
        cyc = np.asarray(rule._cycle)
        assign = np.tile(cyc, n_max // len(cyc) + 1)[:n_max]
    else:
        assign = np.empty(n_max, dtype=np.int64)
        for s, e, c in rule.blocks_upto(n_max):
            assign[s - 1:e] = c
    ns = np.arange(1, n_max + 1)
    dens = np.cumsum(assign == 0) / ns
    return DensityProfile(ns, dens, float(dens.min()), float(dens.max()))


# ---------------------------------------------------------------------------
# model file format (JSON)
# ---------------------------------------------------------------------------

def loads_model(text: str) -> tuple[PortfolioModel, AssumptionBounds]:
    """Parse a JSON model document and validate it.

    Schema::

        {"bounds": {"c0": .., "c1": ..},
         "classes": [{"name": .., "support": [..], "probs": [..], "center": bool}],
         "regime": {"weighted": {"weights": [..]}}
                 | {"assigned": {"round_robin": {"weights": [..]}}
                              | {"blocks": {"a0": .., "growth": .., "order": [..],
                                            "accelerating": bool}}}}

    Raises ModelError on a malformed document, with the offending field,
    or on the first assumption violation.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc

    def need(d, key, where):
        if not isinstance(d, dict) or key not in d:
            raise ModelError(f"missing field {key!r} in {where}")
        return d[key]

    b = need(doc, "bounds", "document")
    bounds = AssumptionBounds(float(need(b, "c0", "bounds")), float(need(b, "c1", "bounds")))
    classes = []
    for i, c in enumerate(need(doc, "classes", "document")):
        classes.append(LossClass(
            name=str(need(c, "name", f"classes[{i}]")),
            support=tuple(float(v) for v in need(c, "support", f"classes[{i}]")),
            probs=tuple(float(v) for v in need(c, "probs", f"classes[{i}]")),
            center=bool(c.get("center", False)),
        ))
    regime = need(doc, "regime", "document")
    if "weighted" in regime:
        w = tuple(float(v) for v in need(regime["weighted"], "weights", "regime.weighted"))
        model = PortfolioModel(tuple(classes), weights=w)
    elif "assigned" in regime:
        a = regime["assigned"]
        if "round_robin" in a:
            rr = tuple(int(v) for v in need(a["round_robin"], "weights", "round_robin"))
            model = PortfolioModel(tuple(classes), rule=RoundRobin(rr))
        elif "blocks" in a:
            blk = a["blocks"]
            model = PortfolioModel(tuple(classes), rule=BlockSchedule(
                a0=int(need(blk, "a0", "blocks")),
                growth=int(need(blk, "growth", "blocks")),
                order=tuple(int(v) for v in need(blk, "order", "blocks")),
                accelerating=bool(blk.get("accelerating", False)),
            ))
        else:
            raise ModelError("regime.assigned needs 'round_robin' or 'blocks'")
    else:
        raise ModelError("regime needs 'weighted' or 'assigned'")

    violations = validate_model(model, bounds)
    if violations:
        v = violations[0]
        raise ModelError(f"class {v.class_name!r} violates {v.clause}: {v.detail}")
    return model, bounds


def load_model(path) -> tuple[PortfolioModel, AssumptionBounds]:
    """Read and parse a model file (see :func:`loads_model`)."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads_model(fh.read())

"""Subset-selection strategies over a scanned database.

Two families with a controlled probability of catching the relative:

* the *conditional* method ranks members by prior-weighted likelihood ratio
  r_i * pi_i and keeps the smallest prefix holding at least a fraction
  alpha of the total weighted mass (efficiency >= alpha, but membership of
  one profile depends on the whole vector), and
* the *target-centered* method keeps every member whose kinship index
  reaches t_alpha, the largest threshold a true relative exceeds with
  probability >= alpha (membership depends on that member's index alone).

Also here: the chance-quantile threshold s_beta (select members whose index
would be unusually big for an unrelated person), combined shared-allele/LR
cutoffs, ranks, and the per-part variants for databases mixing panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .database import ProfileDatabase
from .errors import DataValidationError
from .genetics import (
    FrequencyTable,
    LrDistribution,
    Profile,
    Relationship,
    enumerate_lr_distribution,
    sample_ki_values,
    DEFAULT_ENUMERATION_CAP,
)
from .inference import LrVector, PriorVector

__all__ = [
    "SubsetSelection",
    "ThresholdEstimate",
    "conditional_subset",
    "target_centered_subset",
    "estimate_t_alpha",
    "estimate_s_beta",
    "ibs_lr_subset",
    "rank",
    "heterogeneous_conditional",
    "heterogeneous_target_centered",
    "lr_test_false_positive_rate",
]


@dataclass(frozen=True)
class SubsetSelection:
    """A selected candidate subset and the parameters that produced it."""

    method: str  # conditional | target-centered | s-beta | ibs-lr
    selected: tuple[str, ...]
    threshold: float  # realized cut: weight of the last member in, or the LR threshold
    params: dict = field(default_factory=dict)
    guaranteed_efficiency: float | None = None


@dataclass(frozen=True)
class ThresholdEstimate:
    """An estimated LR threshold with its attained coverage.

    `coverage` is P(LR >= threshold) on the estimation sample (or exact
    law); by construction it is >= the requested level.  `tail_mean` is
    E[LR | LR >= threshold] and is filled for chance-quantile (s_beta)
    estimates, where level * tail_mean bounds the detection probability
    achievable with that threshold.  Monte Carlo estimates at level 1 are
    only a lower-confidence bound on the support minimum and are flagged.
    """

    threshold: float
    level: float
    n_samples: int | None
    exact: bool
    coverage: float
    tail_mean: float | None = None
    lower_confidence: bool = False


def _ordered_weights(lr: LrVector, priors: PriorVector) -> tuple[np.ndarray, np.ndarray]:
    priors = priors.aligned_to(lr.ids)
    w = lr.values * priors.values
    order = np.lexsort((np.array(lr.ids), -w))  # descending weight, ties by ascending id
    return w, order


def conditional_subset(lr: LrVector, priors: PriorVector, alpha: float) -> SubsetSelection:
    """Smallest prefix of the r_i*pi_i ranking holding >= alpha of the total mass.

    Ties in the weight ordering break by ascending member id.  All-zero
    weights select nothing (the mass target is 0).
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    w, order = _ordered_weights(lr, priors)
    cum = np.cumsum(w[order])
    total = float(cum[-1]) if cum.size else 0.0
    goal = alpha * total
    if goal <= 0.0:
        count = 0
    else:
        count = int(np.searchsorted(cum, goal, side="left")) + 1
    chosen = order[:count]
    realized = float(w[chosen[-1]]) if count else math.inf
    return SubsetSelection(
        method="conditional",
        selected=tuple(lr.ids[k] for k in chosen),
        threshold=realized,
        params={"alpha": alpha},
    )


def target_centered_subset(lr: LrVector, threshold: float) -> SubsetSelection:
    """Every member whose own likelihood ratio reaches `threshold` (database order)."""
    if threshold < 0.0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    keep = lr.values >= threshold
    return SubsetSelection(
        method="target-centered",
        selected=tuple(m for m, k in zip(lr.ids, keep) if k),
        threshold=threshold,
        params={},
    )


def _threshold_from_distribution(dist: LrDistribution, level: float) -> ThresholdEstimate:
    t = dist.threshold_at(level)
    return ThresholdEstimate(
        threshold=t,
        level=level,
        n_samples=dist.n_samples,
        exact=dist.exact,
        coverage=dist.tail_prob(t),
        lower_confidence=(not dist.exact) and level == 1.0,
    )


def estimate_t_alpha(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    alpha: float,
    *,
    seed: int | np.random.Generator | None = None,
    n_samples: int = 50_000,
    exact: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ThresholdEstimate:
    """Largest threshold t with P(KI of a true relative >= t) >= alpha.

    Monte Carlo mode simulates `n_samples` relatives of the target and takes
    the descending order statistic L(ceil(alpha * n)); exact mode enumerates
    the relative-law KI distribution on small ladders.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if exact:
        dist = enumerate_lr_distribution(target, rel, freqs, model="relative", cap=cap)
    else:
        if n_samples < 1000:
            raise ValueError("Monte Carlo threshold estimation needs n_samples >= 1000")
        if seed is None:
            raise ValueError("Monte Carlo threshold estimation needs a seed")
        samples = sample_ki_values(target, freqs, n_samples, seed=seed, drawn_from=rel, scored_as=rel)
        dist = LrDistribution.from_samples(samples)
    return _threshold_from_distribution(dist, alpha)


def estimate_s_beta(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    beta: float,
    *,
    seed: int | np.random.Generator | None = None,
    n_samples: int = 50_000,
    exact: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ThresholdEstimate:
    """Largest threshold s with P(KI of an unrelated member >= s) >= beta.

    Selecting at s_beta admits an expected fraction beta of the database;
    the reported tail mean E[KI | KI >= s] times beta bounds the detection
    probability the same threshold guarantees for a true relative.
    """
    if not (0.0 < beta <= 1.0):
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if exact:
        dist = enumerate_lr_distribution(target, rel, freqs, model="population", cap=cap)
    else:
        if n_samples < 1000:
            raise ValueError("Monte Carlo threshold estimation needs n_samples >= 1000")
        if seed is None:
            raise ValueError("Monte Carlo threshold estimation needs a seed")
        samples = sample_ki_values(target, freqs, n_samples, seed=seed, drawn_from=None, scored_as=rel)
        dist = LrDistribution.from_samples(samples)
    est = _threshold_from_distribution(dist, beta)
    return ThresholdEstimate(
        threshold=est.threshold,
        level=beta,
        n_samples=est.n_samples,
        exact=est.exact,
        coverage=est.coverage,
        tail_mean=dist.conditional_mean_at_least(est.threshold),
        lower_confidence=est.lower_confidence,
    )


def ibs_lr_subset(
    target: Profile,
    db: ProfileDatabase,
    rel: Relationship,
    freqs: FrequencyTable | None,
    n_shared: int,
    lr_min: float,
    *,
    workers: int = 1,
) -> SubsetSelection:
    """Members sharing at least `n_shared` alleles with the target AND with KI >= lr_min."""
    if n_shared < 0:
        raise ValueError(f"n_shared must be >= 0, got {n_shared}")
    if lr_min < 0.0:
        raise ValueError(f"lr_min must be >= 0, got {lr_min}")
    values = db.scan(target, rel, workers=workers)
    counts = db.ibs_counts(target)
    keep = (counts >= n_shared) & (values >= lr_min)
    return SubsetSelection(
        method="ibs-lr",
        selected=tuple(m for m, k in zip(db.ids, keep) if k),
        threshold=lr_min,
        params={"n_shared": n_shared},
    )


def rank(candidate_lr: float, lr: LrVector) -> int:
    """1 + number of members with a strictly greater likelihood ratio."""
    return 1 + int(np.count_nonzero(lr.values > candidate_lr))


def _check_partition(parts: Mapping[str, LrVector]) -> None:
    seen: set[str] = set()
    for name, vec in parts.items():
        dup = seen.intersection(vec.ids)
        if dup:
            raise DataValidationError(
                f"parts do not partition the id set: {sorted(dup)[:5]} appear in several parts"
            )
        seen.update(vec.ids)
    if not seen:
        raise DataValidationError("no members in any part")


def heterogeneous_conditional(
    lr_parts: Mapping[str, LrVector],
    prior_parts: Mapping[str, PriorVector],
    alphas: Mapping[str, float],
) -> SubsetSelection:
    """Conditional selection run per panel part with its own alpha.

    The union's guaranteed efficiency is sum_j alpha_j * P(relative in part j
    | relative in database), with the latter taken as the part's share of
    the total prior mass.
    """
    if set(lr_parts) != set(prior_parts) or set(lr_parts) != set(alphas):
        raise DataValidationError("lr parts, prior parts and alphas must share the same part names")
    _check_partition(lr_parts)
    selected: list[str] = []
    params: dict[str, dict] = {}
    mass_total = math.fsum(
        math.fsum(prior_parts[name].values.tolist()) for name in lr_parts
    )
    guaranteed = 0.0
    for name in lr_parts:
        sel = conditional_subset(lr_parts[name], prior_parts[name], alphas[name])
        selected.extend(sel.selected)
        params[name] = {"alpha": alphas[name], "threshold": sel.threshold}
        if mass_total > 0.0:
            share = math.fsum(prior_parts[name].values.tolist()) / mass_total
            guaranteed += alphas[name] * share
    return SubsetSelection(
        method="conditional",
        selected=tuple(selected),
        threshold=math.nan,
        params={"parts": params},
        guaranteed_efficiency=guaranteed,
    )


def heterogeneous_target_centered(
    lr_parts: Mapping[str, LrVector],
    thresholds: Mapping[str, float],
) -> SubsetSelection:
    """Target-centered selection with one threshold per panel part."""
    if set(lr_parts) != set(thresholds):
        raise DataValidationError("lr parts and thresholds must share the same part names")
    _check_partition(lr_parts)
    selected: list[str] = []
    params: dict[str, dict] = {}
    for name in lr_parts:
        sel = target_centered_subset(lr_parts[name], thresholds[name])
        selected.extend(sel.selected)
        params[name] = {"threshold": thresholds[name]}
    return SubsetSelection(
        method="target-centered",
        selected=tuple(selected),
        threshold=math.nan,
        params={"parts": params},
    )


def lr_test_false_positive_rate(
    ki: np.ndarray,
    p_relative: np.ndarray,
    p_population: np.ndarray,
    power: float,
) -> float:
    """False-positive rate of the LR test matched to a given power.

    Over an exact joint support (ki, p_relative, p_population), builds the
    randomized upper-LR acceptance region with P_relative(select) == power
    exactly and returns its P_population(select).  By the optimality of
    likelihood-ratio tests this is a lower bound for the false-positive
    rate of any selection rule with the same power.
    """
    if not (0.0 <= power <= 1.0):
        raise ValueError(f"power must lie in [0, 1], got {power}")
    order = np.argsort(-ki, kind="stable")
    ki_s, ps, pg = ki[order], p_relative[order], p_population[order]
    # merge equal LR values so randomization applies to whole support points
    boundaries = np.nonzero(np.diff(ki_s))[0] + 1
    groups = np.split(np.arange(ki_s.size), boundaries)
    cum_power = 0.0
    fp = 0.0
    for grp in groups:
        g_ps = math.fsum(float(ps[i]) for i in grp)
        g_pg = math.fsum(float(pg[i]) for i in grp)
        if cum_power + g_ps >= power - 1e-15:
            gamma = 0.0 if g_ps == 0.0 else (power - cum_power) / g_ps
            gamma = min(max(gamma, 0.0), 1.0)
            return fp + gamma * g_pg
        cum_power += g_ps
        fp += g_pg
    return fp

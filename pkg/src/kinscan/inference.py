"""Database likelihood ratios and posterior probabilities of relatedness.

Given the vector r of kinship indices between a target and every database
member (with the implicit r0 = 1 for "the relative is not in the database")
and prior probabilities pi_i that member i is the sought relative, the
posterior that member i is the relative is

    P(i | r) = r_i pi_i / sum_{k=0..N} r_k pi_k,      pi_0 = 1 - sum pi_i,

and conditioning on the relative being present drops the k = 0 term.  The
likelihood ratio in favour of "the relative is in the database" is
sum r_i pi_i / pi_D, which under uniform priors is simply the average of
the r_i.  All weighted sums use exact compensated summation (math.fsum);
kinship indices at 15 loci reach ~1e15 while N stays <= 1e7, so plain
double-precision sums of products are safe once summation error is
eliminated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .database import ProfileDatabase
from .errors import DataValidationError, DegenerateEvidenceError
from .genetics import FrequencyTable, Profile, Relationship

__all__ = [
    "LrVector",
    "PriorVector",
    "PosteriorResult",
    "compute_lr_vector",
    "posterior",
    "posterior_given_in_db",
    "subset_posterior",
    "db_lr",
    "member_lr",
    "db_lr_uniform",
    "member_lr_uniform",
]


@dataclass(frozen=True, eq=False)
class LrVector:
    """Per-member likelihood ratios (r_1..r_N) in database order; r_0 = 1 is implicit."""

    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if len(self.ids) != self.values.size:
            raise ValueError("ids and values must have equal length")
        if len(set(self.ids)) != len(self.ids):
            raise DataValidationError("duplicate member ids in LR vector")
        if self.values.size and (not np.all(np.isfinite(self.values)) or np.any(self.values < 0.0)):
            raise ValueError("likelihood ratios must be finite and >= 0")

    def __len__(self) -> int:
        return len(self.ids)

    def value_of(self, member_id: str) -> float:
        return float(self.values[self.ids.index(member_id)])


@dataclass(frozen=True, eq=False)
class PriorVector:
    """Prior probabilities pi_i that member i is the sought relative."""

    ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if len(self.ids) != self.values.size:
            raise ValueError("ids and values must have equal length")
        if len(set(self.ids)) != len(self.ids):
            raise DataValidationError("duplicate member ids in prior vector")
        if self.values.size and (not np.all(np.isfinite(self.values)) or np.any(self.values < 0.0)):
            raise ValueError("priors must be finite and >= 0")
        pi_d = math.fsum(self.values.tolist())
        if pi_d > 1.0 + 1e-9:
            raise ValueError(f"priors sum to {pi_d}, which exceeds 1")

    @classmethod
    def uniform(cls, ids: Sequence[str], pi_d: float = 0.5) -> "PriorVector":
        if not (0.0 <= pi_d <= 1.0):
            raise ValueError(f"pi_d must lie in [0, 1], got {pi_d}")
        n = len(ids)
        return cls(tuple(ids), np.full(n, pi_d / n if n else 0.0))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, float]) -> "PriorVector":
        return cls(tuple(mapping.keys()), np.array(list(mapping.values()), dtype=np.float64))

    @property
    def pi_d(self) -> float:
        return min(1.0, math.fsum(self.values.tolist()))

    @property
    def pi_0(self) -> float:
        return max(0.0, 1.0 - math.fsum(self.values.tolist()))

    def aligned_to(self, ids: Sequence[str]) -> "PriorVector":
        """Same priors reordered to `ids`; the id sets must match."""
        if tuple(ids) == self.ids:
            return self
        index = {m: k for k, m in enumerate(self.ids)}
        if set(ids) != set(index):
            raise DataValidationError("prior ids do not match the LR vector's ids")
        order = np.array([index[m] for m in ids], dtype=np.int64)
        return PriorVector(tuple(ids), self.values[order])


@dataclass(frozen=True, eq=False)
class PosteriorResult:
    """Posterior probabilities per member plus the posterior of 'not in database'."""

    ids: tuple[str, ...]
    probabilities: np.ndarray
    outside: float

    def __getitem__(self, member_id: str) -> float:
        return float(self.probabilities[self.ids.index(member_id)])

    def items(self) -> Iterable[tuple[str, float]]:
        return zip(self.ids, (float(x) for x in self.probabilities))

    def total(self) -> float:
        return math.fsum(self.probabilities.tolist()) + self.outside


def compute_lr_vector(
    target: Profile,
    db: ProfileDatabase | Sequence[Profile],
    rel: Relationship,
    freqs: FrequencyTable | None = None,
    *,
    workers: int = 1,
) -> LrVector:
    """Kinship index of every database member against `target`, in database order.

    Accepts a prepared :class:`ProfileDatabase` or a raw profile list (then
    `freqs` is required).  The scan may run on several workers; the output
    order and values are identical for any worker count.
    """
    if not isinstance(db, ProfileDatabase):
        if freqs is None:
            raise ValueError("freqs is required when passing a raw profile list")
        if len(db) == 0:
            raise DataValidationError("empty profile database")
        db = ProfileDatabase.from_profiles(list(db), freqs)
    values = db.scan(target, rel, workers=workers)
    return LrVector(tuple(db.ids), values)


def _weights(lr: LrVector, priors: PriorVector) -> tuple[np.ndarray, PriorVector]:
    priors = priors.aligned_to(lr.ids)
    return lr.values * priors.values, priors


def posterior(lr: LrVector, priors: PriorVector) -> PosteriorResult:
    """Posterior P(relative = i | r) for every member, plus P(not in database | r).

    All-zero evidence with pi_0 > 0 is not an error: the posterior simply
    concentrates on 'not in database'.  A zero denominator (pi_0 = 0 as
    well) is degenerate and raises.
    """
    w, priors = _weights(lr, priors)
    denom = math.fsum(w.tolist()) + priors.pi_0
    if denom == 0.0:
        raise DegenerateEvidenceError(
            "all member likelihood-times-prior weights are zero and pi_0 = 0"
        )
    return PosteriorResult(lr.ids, w / denom, priors.pi_0 / denom)


def posterior_given_in_db(lr: LrVector, priors: PriorVector) -> PosteriorResult:
    """Posterior over members given the relative is in the database (k = 0 term dropped)."""
    w, priors = _weights(lr, priors)
    denom = math.fsum(w.tolist())
    if denom == 0.0:
        raise DegenerateEvidenceError("all member likelihood-times-prior weights are zero")
    return PosteriorResult(lr.ids, w / denom, 0.0)


def subset_posterior(lr: LrVector, priors: PriorVector, subset: Iterable[str]) -> float:
    """Posterior probability that the relative lies in `subset` of the members."""
    wanted = set(subset)
    unknown = wanted - set(lr.ids)
    if unknown:
        raise ValueError(f"subset contains unknown ids: {sorted(unknown)[:5]}")
    w, priors = _weights(lr, priors)
    denom = math.fsum(w.tolist()) + priors.pi_0
    if denom == 0.0:
        raise DegenerateEvidenceError("zero posterior denominator")
    hits = [float(w[k]) for k, m in enumerate(lr.ids) if m in wanted]
    return math.fsum(hits) / denom


def db_lr(lr: LrVector, priors: PriorVector) -> float:
    """Likelihood ratio in favour of the relative being in the database."""
    w, priors = _weights(lr, priors)
    pi_d = priors.pi_d
    if pi_d == 0.0:
        raise DegenerateEvidenceError("pi_D = 0: the database has zero prior mass")
    return math.fsum(w.tolist()) / pi_d


def member_lr(lr: LrVector, priors: PriorVector, member_id: str) -> float:
    """Likelihood ratio in favour of member `member_id` being the relative.

    r_i (1 - pi_i) / (sum_{k != i} r_k pi_k + pi_0).
    """
    w, priors = _weights(lr, priors)
    try:
        i = lr.ids.index(member_id)
    except ValueError:
        raise ValueError(f"unknown member id {member_id!r}") from None
    rest = math.fsum(np.delete(w, i).tolist()) + priors.pi_0
    if rest == 0.0:
        raise DegenerateEvidenceError(f"member {member_id!r}: zero likelihood-ratio denominator")
    return float(lr.values[i]) * (1.0 - float(priors.values[i])) / rest


def db_lr_uniform(lr: LrVector) -> float:
    """Uniform-prior special case: the average likelihood ratio over the database."""
    if len(lr) == 0:
        raise DegenerateEvidenceError("empty LR vector")
    return math.fsum(lr.values.tolist()) / len(lr)


def member_lr_uniform(lr: LrVector, member_id: str, pi_d: float) -> float:
    """Uniform-prior member likelihood ratio.

    r_i / ( pi_D/(N - pi_D) * sum_{k != i} r_k  +  N (1 - pi_D)/(N - pi_D) ).
    """
    if not (0.0 < pi_d <= 1.0):
        raise ValueError(f"pi_d must lie in (0, 1], got {pi_d}")
    try:
        i = lr.ids.index(member_id)
    except ValueError:
        raise ValueError(f"unknown member id {member_id!r}") from None
    n = len(lr)
    rest = math.fsum(np.delete(lr.values, i).tolist())
    denom = pi_d / (n - pi_d) * rest + n * (1.0 - pi_d) / (n - pi_d)
    if denom == 0.0:
        raise DegenerateEvidenceError(f"member {member_id!r}: zero likelihood-ratio denominator")
    return float(lr.values[i]) / denom

"""STR profiles, population sampling, and kinship likelihood ratios.

The population model is Hardy-Weinberg equilibrium over independent loci: a
random member's genotype at each locus is two alleles drawn i.i.d. from the
locus frequencies.  A relative's profile follows the IBD mixture of a
:class:`Relationship` ``(k0, k1, k2)``: at each locus, with probability
``k2`` both target alleles are copied, with ``k1`` one uniformly chosen
target allele is copied and the other is drawn from the population, and
with ``k0`` both alleles are population draws.

The kinship index (KI) of a candidate ``C`` against a target is the
likelihood ratio relative-versus-unrelated, a product over shared loci of

    k0  +  k1 * T1(C) / P(C)  +  k2 * [C == target genotype] / P(C)

where ``P(C)`` is the candidate genotype's Hardy-Weinberg probability and
``T1(C)`` the probability of observing ``C`` given exactly one allele
identical by descent with the target.  ``enumerate_lr_distribution``
computes the exact law of the KI under either model on small allelic
ladders; it is the oracle everything else is tested against.

All stochastic operations take an explicit seed (or a prepared
``numpy.random.Generator``).  Parallel and multi-task sampling derives
per-task generators with ``derive_rng(seed, *key)``, a counter-based
scheme built on ``numpy.random.SeedSequence`` spawn keys, so results are
reproducible regardless of worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataValidationError, DisjointPanelsError, EnumerationCapError

__all__ = [
    "FrequencyTable",
    "LocusFrequencies",
    "Locus",
    "Profile",
    "Relationship",
    "UNRELATED",
    "PARENT_CHILD",
    "FULL_SIBLING",
    "HALF_SIBLING",
    "IDENTITY",
    "RELATIONSHIPS",
    "relationship_by_name",
    "LrDistribution",
    "canonical_genotype",
    "derive_rng",
    "rmp",
    "kinship_index",
    "locus_kinship_factor",
    "sample_unrelated",
    "sample_relative",
    "sample_ki_values",
    "enumerate_lr_distribution",
    "enumerate_ki_ibs_distribution",
    "DEFAULT_ENUMERATION_CAP",
]

# Per-locus frequency sums must land in this window; --normalize rescales,
# otherwise anything further than SUM_TOLERANCE from 1 is rejected.
SUM_SLACK = 0.01
SUM_TOLERANCE = 1e-6

DEFAULT_ENUMERATION_CAP = 1_000_000


def canonical_genotype(a: str, b: str) -> tuple[str, str]:
    """Unordered allele pair in canonical (label-sorted) order."""
    return (a, b) if a <= b else (b, a)


def derive_rng(seed: int | np.random.Generator, *key: int) -> np.random.Generator:
    """Generator for task `key` under the run seed.

    Distinct keys yield independent streams; the mapping depends only on
    (seed, key), never on scheduling, so any worker layout reproduces the
    same draws.
    """
    if isinstance(seed, np.random.Generator):
        if key:
            raise ValueError("cannot derive a keyed generator from an existing Generator")
        return seed
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


@dataclass(frozen=True)
class Locus:
    """A typed STR locus: a name and its ordered allelic ladder."""

    name: str
    ladder: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.ladder:
            raise DataValidationError(f"locus {self.name!r}: empty allelic ladder")
        if len(set(self.ladder)) != len(self.ladder):
            raise DataValidationError(f"locus {self.name!r}: duplicate allele labels in ladder")


class LocusFrequencies:
    """Allele frequencies at one locus, with index lookup and sampling support."""

    __slots__ = ("name", "alleles", "freqs", "_index", "_cum")

    def __init__(self, name: str, alleles: Sequence[str], freqs: Sequence[float]):
        self.name = name
        self.alleles = tuple(alleles)
        self.freqs = np.asarray(freqs, dtype=np.float64)
        if len(self.alleles) != self.freqs.size:
            raise DataValidationError(f"locus {name!r}: allele/frequency length mismatch")
        if len(set(self.alleles)) != len(self.alleles):
            raise DataValidationError(f"locus {name!r}: duplicate allele labels")
        if self.freqs.size == 0:
            raise DataValidationError(f"locus {name!r}: empty allelic ladder")
        if not np.all(np.isfinite(self.freqs)) or np.any(self.freqs <= 0.0):
            raise DataValidationError(f"locus {name!r}: every allele frequency must be finite and > 0")
        self._index = {a: i for i, a in enumerate(self.alleles)}
        self._cum = np.cumsum(self.freqs)

    def __len__(self) -> int:
        return len(self.alleles)

    @property
    def locus(self) -> Locus:
        return Locus(self.name, self.alleles)

    def index(self, allele: str) -> int:
        try:
            return self._index[allele]
        except KeyError:
            raise DataValidationError(
                f"locus {self.name!r}: allele {allele!r} not in the frequency table"
            ) from None

    def frequency(self, allele: str) -> float:
        return float(self.freqs[self.index(allele)])

    def sum(self) -> float:
        return math.fsum(self.freqs.tolist())

    def sample_indices(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n allele indices drawn from the locus frequencies."""
        u = rng.random(n) * self._cum[-1]
        idx = np.searchsorted(self._cum, u, side="right")
        return np.minimum(idx, len(self.alleles) - 1)


class FrequencyTable:
    """Per-locus allele frequency maps defining the population distribution.

    Validation enforces strictly positive frequencies and per-locus sums
    within ``SUM_TOLERANCE`` of 1.  Sums inside ``[1 - SUM_SLACK, 1 + SUM_SLACK]``
    are rescaled to 1 when ``normalize`` is requested; anything else is
    rejected, naming the offending locus.
    """

    def __init__(self, loci: Mapping[str, LocusFrequencies]):
        self._loci = dict(loci)

    @classmethod
    def from_mapping(
        cls,
        mapping: Mapping[str, Mapping[str, float]],
        *,
        normalize: bool = False,
        source: str = "<mapping>",
    ) -> "FrequencyTable":
        loci: dict[str, LocusFrequencies] = {}
        for name, allele_freqs in mapping.items():
            lf = LocusFrequencies(name, list(allele_freqs.keys()), list(allele_freqs.values()))
            total = lf.sum()
            if not (1.0 - SUM_SLACK <= total <= 1.0 + SUM_SLACK):
                raise DataValidationError(
                    f"{source}: locus {name!r}: frequencies sum to {total:.6f}, "
                    f"outside [{1 - SUM_SLACK}, {1 + SUM_SLACK}]"
                )
            if abs(total - 1.0) > SUM_TOLERANCE:
                if not normalize:
                    raise DataValidationError(
                        f"{source}: locus {name!r}: frequencies sum to {total:.6f}; "
                        "rerun with normalization enabled to rescale"
                    )
                lf = LocusFrequencies(name, lf.alleles, lf.freqs / total)
            loci[name] = lf
        if not loci:
            raise DataValidationError(f"{source}: no loci defined")
        return cls(loci)

    @property
    def loci(self) -> tuple[str, ...]:
        return tuple(self._loci.keys())

    def __contains__(self, name: str) -> bool:
        return name in self._loci

    def locus(self, name: str) -> LocusFrequencies:
        try:
            return self._loci[name]
        except KeyError:
            raise DataValidationError(f"locus {name!r} not in the frequency table") from None

    def to_mapping(self) -> dict[str, dict[str, float]]:
        return {
            name: {a: float(f) for a, f in zip(lf.alleles, lf.freqs)}
            for name, lf in self._loci.items()
        }


@dataclass(frozen=True)
class Relationship:
    """IBD-sharing coefficients (k0, k1, k2) of a pairwise relationship.

    k2 is the probability of sharing both alleles identical by descent at a
    locus, k1 of sharing exactly one, k0 of sharing none.  The half-sibling
    coefficients also cover grandparent-grandchild and avuncular pairs,
    which are indistinguishable from half-siblings on unlinked autosomal
    markers.
    """

    k0: float
    k1: float
    k2: float
    name: str = "custom"

    def __post_init__(self) -> None:
        for label, value in (("k0", self.k0), ("k1", self.k1), ("k2", self.k2)):
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{label} must lie in [0, 1], got {value}")
        if abs(self.k0 + self.k1 + self.k2 - 1.0) > 1e-9:
            raise ValueError("IBD coefficients must sum to 1")


UNRELATED = Relationship(1.0, 0.0, 0.0, "unrelated")
PARENT_CHILD = Relationship(0.0, 1.0, 0.0, "parent-child")
FULL_SIBLING = Relationship(0.25, 0.5, 0.25, "sibling")
HALF_SIBLING = Relationship(0.5, 0.5, 0.0, "half-sibling")
IDENTITY = Relationship(0.0, 0.0, 1.0, "identity")

RELATIONSHIPS: dict[str, Relationship] = {
    r.name: r for r in (UNRELATED, PARENT_CHILD, FULL_SIBLING, HALF_SIBLING, IDENTITY)
}


def relationship_by_name(name: str) -> Relationship:
    try:
        return RELATIONSHIPS[name]
    except KeyError:
        known = ", ".join(sorted(RELATIONSHIPS))
        raise ValueError(f"unknown relationship {name!r} (known: {known})") from None


@dataclass(frozen=True)
class Profile:
    """A multi-locus STR genotype with an opaque id and a panel label.

    Genotypes are stored as canonical (label-sorted) allele pairs; the
    panel label identifies which locus set was typed.
    """

    id: str
    panel: str
    genotypes: Mapping[str, tuple[str, str]]

    @classmethod
    def build(
        cls,
        profile_id: str,
        genotypes: Mapping[str, tuple[str, str] | Sequence[str]],
        panel: str = "",
    ) -> "Profile":
        if not genotypes:
            raise DataValidationError(f"profile {profile_id!r}: no genotypes")
        canon = {}
        for locus, pair in genotypes.items():
            a, b = pair
            canon[locus] = canonical_genotype(str(a), str(b))
        return cls(profile_id, panel, canon)

    @property
    def loci(self) -> tuple[str, ...]:
        return tuple(sorted(self.genotypes))


def rmp(profile: Profile, freqs: FrequencyTable) -> float:
    """Random match probability of a profile under HWE and locus independence.

    Per locus with alleles (a, b) the factor is ``p_a * p_b * (2 - delta_ab)``;
    the profile RMP is the product over its loci.
    """
    value = 1.0
    for locus in sorted(profile.genotypes):
        a, b = profile.genotypes[locus]
        lf = freqs.locus(locus)
        pa = lf.frequency(a)
        pb = lf.frequency(b)
        value *= pa * pb * (2.0 if a != b else 1.0)
    return value


def _one_ibd_prob(candidate: tuple[str, str], shared: str, lf: LocusFrequencies) -> float:
    """P(candidate genotype | one allele IBD equal to `shared`)."""
    u, v = candidate
    if u == v:
        return lf.frequency(u) if u == shared else 0.0
    if shared == u:
        return lf.frequency(v)
    if shared == v:
        return lf.frequency(u)
    return 0.0


def locus_kinship_factor(
    lf: LocusFrequencies,
    target_genotype: tuple[str, str],
    candidate_genotype: tuple[str, str],
    rel: Relationship,
) -> float:
    """Single-locus kinship index factor for one target/candidate genotype pair."""
    ta, tb = target_genotype
    ca, cb = candidate_genotype
    pa = lf.frequency(ca)
    pb = lf.frequency(cb)
    pg = pa * pb * (2.0 if ca != cb else 1.0)
    one_ibd = 0.5 * (_one_ibd_prob((ca, cb), ta, lf) + _one_ibd_prob((ca, cb), tb, lf))
    match = canonical_genotype(ta, tb) == canonical_genotype(ca, cb)
    return rel.k0 + rel.k1 * (one_ibd / pg) + (rel.k2 / pg if match else 0.0)


def kinship_index(
    target: Profile,
    candidate: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
) -> float:
    """Kinship index of `candidate` as a `rel`-relative of `target`.

    Computed over the loci typed in both profiles (heterogeneous panels are
    supported); raises if the panels are disjoint.
    """
    shared = sorted(set(target.genotypes) & set(candidate.genotypes))
    if not shared:
        raise DisjointPanelsError(
            f"profiles {target.id!r} and {candidate.id!r} share no typed locus"
        )
    value = 1.0
    for locus in shared:
        lf = freqs.locus(locus)
        value *= locus_kinship_factor(lf, target.genotypes[locus], candidate.genotypes[locus], rel)
    return value


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def sample_unrelated(
    freqs: FrequencyTable,
    loci: Sequence[str] | None = None,
    *,
    seed: int | np.random.Generator,
    profile_id: str = "target",
    panel: str = "",
) -> Profile:
    """One random population member: two i.i.d. allele draws per locus."""
    names = tuple(loci) if loci is not None else freqs.loci
    if not names:
        raise ValueError("empty locus panel")
    rng = derive_rng(seed)
    genotypes = {}
    for locus in names:
        lf = freqs.locus(locus)
        i, j = lf.sample_indices(2, rng)
        genotypes[locus] = canonical_genotype(lf.alleles[i], lf.alleles[j])
    return Profile(profile_id, panel, genotypes)


def sample_relative(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    *,
    seed: int | np.random.Generator,
    profile_id: str = "relative",
    panel: str | None = None,
) -> Profile:
    """One simulated `rel`-relative of `target`, locus by locus.

    Per locus: copy both target alleles with probability k2, copy one
    (uniformly chosen) and draw the other from the population with k1, or
    draw both from the population with k0.
    """
    rng = derive_rng(seed)
    genotypes = {}
    for locus in sorted(target.genotypes):
        lf = freqs.locus(locus)
        ta, tb = target.genotypes[locus]
        lf.index(ta), lf.index(tb)  # reject unknown target alleles early
        u = rng.random()
        if u < rel.k2:
            genotypes[locus] = canonical_genotype(ta, tb)
        elif u < rel.k2 + rel.k1:
            shared = ta if rng.integers(2) == 0 else tb
            other = lf.alleles[int(lf.sample_indices(1, rng)[0])]
            genotypes[locus] = canonical_genotype(shared, other)
        else:
            i, j = lf.sample_indices(2, rng)
            genotypes[locus] = canonical_genotype(lf.alleles[i], lf.alleles[j])
    return Profile(profile_id, panel if panel is not None else target.panel, genotypes)


# ---------------------------------------------------------------------------
# per-locus genotype tables: the shared computational core
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _LocusTable:
    """All unordered genotypes of one locus scored against a fixed target.

    `codes` encodes genotype (i, j), i <= j, as i * size + j so that dense
    lookup tables can be gathered with a single fancy index.  `p_population`
    is the HWE probability, `p_relative` the probability under the IBD
    mixture (which is exactly value * p_population), `ibs` the shared-allele
    count with the target genotype.
    """

    size: int
    codes: np.ndarray
    values: np.ndarray
    p_population: np.ndarray
    p_relative: np.ndarray
    ibs: np.ndarray

    def dense_values(self) -> np.ndarray:
        dense = np.zeros(self.size * self.size)
        dense[self.codes] = self.values
        return dense

    def dense_ibs(self) -> np.ndarray:
        dense = np.zeros(self.size * self.size, dtype=np.int64)
        dense[self.codes] = self.ibs
        return dense


def _locus_table(lf: LocusFrequencies, target_genotype: tuple[str, str], rel: Relationship) -> _LocusTable:
    p = lf.freqs
    m = len(lf)
    ta = lf.index(target_genotype[0])
    tb = lf.index(target_genotype[1])
    t1, t2 = (ta, tb) if ta <= tb else (tb, ta)

    n_genotypes = m * (m + 1) // 2
    codes = np.empty(n_genotypes, dtype=np.int64)
    values = np.empty(n_genotypes)
    p_pop = np.empty(n_genotypes)
    ibs = np.empty(n_genotypes, dtype=np.int64)

    k = 0
    for i in range(m):
        pi = float(p[i])
        for j in range(i, m):
            pj = float(p[j])
            pg = pi * pj * (2.0 if i != j else 1.0)
            if i == j:
                c_a = pi if i == ta else 0.0
                c_b = pi if i == tb else 0.0
            else:
                c_a = pj if i == ta else (pi if j == ta else 0.0)
                c_b = pj if i == tb else (pi if j == tb else 0.0)
            one_ibd = 0.5 * (c_a + c_b)
            match = i == t1 and j == t2
            values[k] = rel.k0 + rel.k1 * (one_ibd / pg) + (rel.k2 / pg if match else 0.0)
            p_pop[k] = pg
            if match:
                ibs[k] = 2
            elif i in (t1, t2) or j in (t1, t2):
                ibs[k] = 1
            else:
                ibs[k] = 0
            codes[k] = i * m + j
            k += 1

    return _LocusTable(m, codes, values, p_pop, values * p_pop, ibs)


def _law_probs(table: _LocusTable, population: bool) -> np.ndarray:
    return table.p_population if population else table.p_relative


def sample_ki_values(
    target: Profile,
    freqs: FrequencyTable,
    n: int,
    *,
    seed: int | np.random.Generator,
    drawn_from: Relationship | None,
    scored_as: Relationship | Sequence[Relationship],
) -> np.ndarray:
    """Kinship-index values of `n` simulated profiles against `target`.

    Profiles are drawn locus-by-locus from the population law
    (``drawn_from=None``) or from the relative law of ``drawn_from``; the
    same simulated genotypes are scored under every relationship in
    ``scored_as``.  Returns shape (n,) for a single relationship, else
    (len(scored_as), n).  Only the index values are materialized, which is
    what makes large threshold estimations cheap; the induced law is
    identical to sampling full profiles and scoring them.
    """
    single = isinstance(scored_as, Relationship)
    rels: tuple[Relationship, ...] = (scored_as,) if single else tuple(scored_as)
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = derive_rng(seed)
    out = np.ones((len(rels), n))
    for locus in sorted(target.genotypes):
        lf = freqs.locus(locus)
        tg = target.genotypes[locus]
        tables = [_locus_table(lf, tg, rel) for rel in rels]
        law_table = tables[0] if drawn_from is None else _locus_table(lf, tg, drawn_from)
        law = _law_probs(law_table, population=drawn_from is None)
        cum = np.cumsum(law)
        draws = np.searchsorted(cum, rng.random(n) * cum[-1], side="right")
        np.minimum(draws, law.size - 1, out=draws)
        for r, table in enumerate(tables):
            out[r] *= table.values[draws]
    return out[0] if single else out


# ---------------------------------------------------------------------------
# LR distributions and exact enumeration
# ---------------------------------------------------------------------------


class LrDistribution:
    """Law of a kinship index: exact (value, probability) support or samples.

    Exact laws validate that probabilities sum to 1 within 1e-12 and carry
    only positive-probability support points.  Empirical laws store the
    sorted sample.
    """

    __slots__ = ("values", "probs", "exact")

    def __init__(self, values: np.ndarray, probs: np.ndarray | None, exact: bool):
        self.values = values
        self.probs = probs
        self.exact = exact

    @classmethod
    def exact_law(cls, values: Iterable[float], probs: Iterable[float]) -> "LrDistribution":
        v = np.asarray(list(values), dtype=np.float64)
        p = np.asarray(list(probs), dtype=np.float64)
        if v.size != p.size or v.size == 0:
            raise ValueError("values and probabilities must be equal-length and non-empty")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise ValueError("support values must be finite and >= 0")
        if np.any(p < 0.0):
            raise ValueError("probabilities must be >= 0")
        keep = p > 0.0
        v, p = v[keep], p[keep]
        total = math.fsum(p.tolist())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within 1e-12")
        order = np.argsort(v, kind="stable")
        return cls(v[order], p[order], exact=True)

    @classmethod
    def from_samples(cls, samples: Iterable[float]) -> "LrDistribution":
        s = np.sort(np.asarray(list(samples), dtype=np.float64))
        if s.size == 0:
            raise ValueError("empty sample")
        if np.any(s < 0.0) or not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite and >= 0")
        return cls(s, None, exact=False)

    @property
    def n_samples(self) -> int | None:
        return None if self.exact else int(self.values.size)

    def tail_prob(self, t: float) -> float:
        """P(LR >= t)."""
        idx = int(np.searchsorted(self.values, t, side="left"))
        if self.exact:
            return float(math.fsum(self.probs[idx:].tolist()))
        return float(self.values.size - idx) / self.values.size

    def threshold_at(self, level: float) -> float:
        """Largest t with P(LR >= t) >= level.

        Empirical convention: the descending order statistic L(ceil(level*n)),
        which includes ties at the threshold in the attained coverage.
        """
        if not (0.0 < level <= 1.0):
            raise ValueError(f"level must lie in (0, 1], got {level}")
        if self.exact:
            tails = np.cumsum(self.probs[::-1])[::-1]  # tails[i] = P(LR >= values[i])
            qualifying = np.nonzero(tails >= level)[0]
            return float(self.values[qualifying[-1]])
        n = self.values.size
        k = max(1, math.ceil(level * n - 1e-9))
        return float(self.values[n - k])

    def mean(self) -> float:
        if self.exact:
            return float(math.fsum((self.values * self.probs).tolist()))
        return float(np.mean(self.values))

    def conditional_mean_at_least(self, t: float) -> float:
        """E[LR | LR >= t]; raises on an empty tail."""
        idx = int(np.searchsorted(self.values, t, side="left"))
        if idx >= self.values.size:
            raise ValueError(f"no mass at or above {t}")
        if self.exact:
            tail = math.fsum(self.probs[idx:].tolist())
            return float(math.fsum((self.values[idx:] * self.probs[idx:]).tolist()) / tail)
        return float(np.mean(self.values[idx:]))

    def support_min(self) -> float:
        return float(self.values[0])

    def support_max(self) -> float:
        return float(self.values[-1])


def _enumeration_combos(target: Profile, freqs: FrequencyTable) -> int:
    combos = 1
    for locus in target.genotypes:
        combos *= len(freqs.locus(locus)) ** 2
    return combos


def _check_cap(target: Profile, freqs: FrequencyTable, cap: int) -> None:
    combos = _enumeration_combos(target, freqs)
    if combos > cap:
        raise EnumerationCapError(
            f"{combos} genotype combinations exceed the enumeration cap {cap}; "
            "use Monte Carlo sampling instead"
        )


def _enumerate_pair(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    cap: int,
) -> dict[float, list[float]]:
    """Joint support {KI value -> [P under relative law, P under population law]}."""
    _check_cap(target, freqs, cap)
    acc: dict[float, list[float]] = {1.0: [1.0, 1.0]}
    for locus in sorted(target.genotypes):
        table = _locus_table(freqs.locus(locus), target.genotypes[locus], rel)
        nxt: dict[float, list[float]] = {}
        for value, (ps, pg) in acc.items():
            for k in range(table.values.size):
                nv = value * float(table.values[k])
                entry = nxt.get(nv)
                if entry is None:
                    nxt[nv] = [ps * float(table.p_relative[k]), pg * float(table.p_population[k])]
                else:
                    entry[0] += ps * float(table.p_relative[k])
                    entry[1] += pg * float(table.p_population[k])
        acc = nxt
    return acc


def enumerate_lr_distribution(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    *,
    model: str = "population",
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> LrDistribution:
    """Exact law of KI(target, X) with X drawn as a relative or from the population.

    ``model`` selects the law: "relative" draws X from the IBD mixture of
    `rel`, "population" from Hardy-Weinberg.  Only feasible when the product
    of squared ladder sizes over the target's loci stays within `cap`.
    """
    if model not in ("relative", "population"):
        raise ValueError(f"model must be 'relative' or 'population', got {model!r}")
    acc = _enumerate_pair(target, rel, freqs, cap)
    pick = 0 if model == "relative" else 1
    values = list(acc.keys())
    probs = [pair[pick] for pair in acc.values()]
    return LrDistribution.exact_law(values, probs)


def enumerate_ki_ibs_distribution(
    target: Profile,
    rel: Relationship,
    freqs: FrequencyTable,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Exact joint law of (KI, shared-allele count) under both models.

    Returns (ki_values, ibs_counts, p_relative, p_population) aligned arrays,
    sorted by (ki, ibs).  This drives the comparison of combined
    shared-allele/LR cutoffs against pure LR thresholds.
    """
    _check_cap(target, freqs, cap)
    acc: dict[tuple[float, int], list[float]] = {(1.0, 0): [1.0, 1.0]}
    for locus in sorted(target.genotypes):
        table = _locus_table(freqs.locus(locus), target.genotypes[locus], rel)
        nxt: dict[tuple[float, int], list[float]] = {}
        for (value, count), (ps, pg) in acc.items():
            for k in range(table.values.size):
                key = (value * float(table.values[k]), count + int(table.ibs[k]))
                entry = nxt.get(key)
                if entry is None:
                    nxt[key] = [ps * float(table.p_relative[k]), pg * float(table.p_population[k])]
                else:
                    entry[0] += ps * float(table.p_relative[k])
                    entry[1] += pg * float(table.p_population[k])
        acc = nxt
    keys = sorted(acc.keys())
    ki = np.array([k[0] for k in keys])
    ibs = np.array([k[1] for k in keys], dtype=np.int64)
    p_rel = np.array([acc[k][0] for k in keys])
    p_pop = np.array([acc[k][1] for k in keys])
    return ki, ibs, p_rel, p_pop

"""Profile model, sampling laws, kinship indices, and the enumeration oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinscan.errors import DataValidationError, DisjointPanelsError, EnumerationCapError
from kinscan.genetics import (
    FULL_SIBLING,
    HALF_SIBLING,
    IDENTITY,
    PARENT_CHILD,
    RELATIONSHIPS,
    UNRELATED,
    FrequencyTable,
    LrDistribution,
    Profile,
    Relationship,
    canonical_genotype,
    derive_rng,
    enumerate_lr_distribution,
    kinship_index,
    rmp,
    sample_ki_values,
    sample_relative,
    sample_unrelated,
)

# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def oracle_hwe_prob(pair, freqs_map):
    a, b = pair
    return freqs_map[a] * freqs_map[b] * (2.0 if a != b else 1.0)


def oracle_parent_child_law(target_pair, freqs_map):
    """Child genotype law by explicit transmission: one allele passed from the
    target parent (uniform over its two), the other drawn from the population."""
    law = {}
    for transmitted in target_pair:
        for other, p_other in freqs_map.items():
            geno = canonical_genotype(transmitted, other)
            law[geno] = law.get(geno, 0.0) + 0.5 * p_other
    return law


def oracle_ibs(pair_a, pair_b):
    """Multiset intersection size of two allele pairs."""
    count = 0
    remaining = list(pair_b)
    for allele in pair_a:
        if allele in remaining:
            remaining.remove(allele)
            count += 1
    return count


# ---------------------------------------------------------------------------
# frequency tables and relationships
# ---------------------------------------------------------------------------


class TestFrequencyTable:
    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(DataValidationError, match="L1"):
            FrequencyTable.from_mapping({"L1": {"a": 0.0, "b": 1.0}})

    def test_rejects_sum_outside_slack(self):
        with pytest.raises(DataValidationError, match="L1"):
            FrequencyTable.from_mapping({"L1": {"a": 0.5, "b": 0.4}}, normalize=True)

    def test_normalize_rescales_inside_slack(self):
        table = FrequencyTable.from_mapping({"L1": {"a": 0.495, "b": 0.5}}, normalize=True)
        assert table.locus("L1").sum() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_near_miss_without_normalize(self):
        with pytest.raises(DataValidationError, match="normaliz"):
            FrequencyTable.from_mapping({"L1": {"a": 0.495, "b": 0.5}})

    def test_unknown_locus_and_allele_errors_name_the_offender(self, two_allele_freqs):
        with pytest.raises(DataValidationError, match="L9"):
            two_allele_freqs.locus("L9")
        with pytest.raises(DataValidationError, match="'q'"):
            two_allele_freqs.locus("L1").frequency("q")


class TestRelationship:
    def test_presets_sum_exactly_to_one(self):
        for rel in RELATIONSHIPS.values():
            assert rel.k0 + rel.k1 + rel.k2 == 1.0

    def test_preset_coefficients(self):
        assert (UNRELATED.k0, UNRELATED.k1, UNRELATED.k2) == (1.0, 0.0, 0.0)
        assert (HALF_SIBLING.k0, HALF_SIBLING.k1, HALF_SIBLING.k2) == (0.5, 0.5, 0.0)
        assert (PARENT_CHILD.k0, PARENT_CHILD.k1, PARENT_CHILD.k2) == (0.0, 1.0, 0.0)
        assert (FULL_SIBLING.k0, FULL_SIBLING.k1, FULL_SIBLING.k2) == (0.25, 0.5, 0.25)
        assert (IDENTITY.k0, IDENTITY.k1, IDENTITY.k2) == (0.0, 0.0, 1.0)

    def test_rejects_bad_coefficients(self):
        with pytest.raises(ValueError):
            Relationship(0.5, 0.6, 0.1)
        with pytest.raises(ValueError):
            Relationship(-0.1, 1.1, 0.0)


# ---------------------------------------------------------------------------
# rmp
# ---------------------------------------------------------------------------


class TestRmp:
    def test_homozygote(self):
        freqs = FrequencyTable.from_mapping({"L1": {"a": 0.2, "b": 0.8}})
        prof = Profile.build("p", {"L1": ("a", "a")})
        assert rmp(prof, freqs) == 0.2 * 0.2

    def test_heterozygote(self):
        freqs = FrequencyTable.from_mapping({"L1": {"a": 0.1, "b": 0.2, "c": 0.7}})
        prof = Profile.build("p", {"L1": ("a", "b")})
        assert rmp(prof, freqs) == 2 * 0.1 * 0.2

    def test_product_over_loci(self):
        freqs = FrequencyTable.from_mapping(
            {"L1": {"a": 0.1, "b": 0.2, "c": 0.7}, "L2": {"a": 0.1, "b": 0.2, "c": 0.7}}
        )
        prof = Profile.build("p", {"L1": ("a", "b"), "L2": ("a", "b")})
        assert rmp(prof, freqs) == pytest.approx(0.0016, rel=1e-15)

    def test_unknown_allele_is_rejected(self, two_allele_freqs):
        prof = Profile.build("p", {"L1": ("a", "z")})
        with pytest.raises(DataValidationError, match="L1"):
            rmp(prof, two_allele_freqs)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


class TestSampleUnrelated:
    def test_degenerate_ladder_gives_point_mass(self):
        freqs = FrequencyTable.from_mapping({"L1": {"a": 1.0}, "L2": {"a": 1.0}})
        prof = sample_unrelated(freqs, seed=1)
        assert prof.genotypes == {"L1": ("a", "a"), "L2": ("a", "a")}

    def test_deterministic_given_seed(self, synthetic_freqs):
        a = sample_unrelated(synthetic_freqs, seed=99)
        b = sample_unrelated(synthetic_freqs, seed=99)
        assert a == b
        assert a != sample_unrelated(synthetic_freqs, seed=100)

    def test_homozygote_fraction_matches_binomial_oracle(self, two_allele_freqs):
        # P(genotype == (a,a)) = 0.3^2 = 0.09 under HWE
        n = 50_000
        rng = derive_rng(2024)
        hits = sum(
            sample_unrelated(two_allele_freqs, seed=rng).genotypes["L1"] == ("a", "a")
            for _ in range(n)
        )
        p = 0.09
        se = math.sqrt(p * (1 - p) / n)
        assert abs(hits / n - p) < 3 * se

    def test_empty_panel_rejected(self, two_allele_freqs):
        with pytest.raises(ValueError):
            sample_unrelated(two_allele_freqs, loci=(), seed=1)


class TestSampleRelative:
    def test_identity_copies_target(self, synthetic_freqs):
        target = sample_unrelated(synthetic_freqs, seed=5)
        twin = sample_relative(target, IDENTITY, synthetic_freqs, seed=6)
        assert twin.genotypes == target.genotypes

    def test_parent_child_always_shares_an_allele(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "z")})
        rng = derive_rng(7)
        for _ in range(500):
            child = sample_relative(target, PARENT_CHILD, small_freqs, seed=rng)
            for locus, pair in child.genotypes.items():
                assert set(pair) & set(target.genotypes[locus])

    def test_unrelated_matches_hwe_law(self, small_freqs):
        # chi-square goodness of fit of sampled genotype counts vs HWE probabilities
        from scipy.stats import chisquare

        target = Profile.build("t", {"L2": ("x", "y")})
        n = 20_000
        values = {}
        rng = derive_rng(11)
        for _ in range(n):
            g = sample_relative(target, UNRELATED, small_freqs, seed=rng).genotypes["L2"]
            values[g] = values.get(g, 0) + 1
        fmap = {"x": 0.2, "y": 0.5, "z": 0.3}
        genotypes = sorted(values)
        observed = [values[g] for g in genotypes]
        expected = [n * oracle_hwe_prob(g, fmap) for g in genotypes]
        assert chisquare(observed, expected).pvalue > 1e-3

    def test_unknown_target_allele_rejected(self, two_allele_freqs):
        target = Profile.build("t", {"L1": ("a", "q")})
        with pytest.raises(DataValidationError, match="'q'"):
            sample_relative(target, FULL_SIBLING, two_allele_freqs, seed=3)


# ---------------------------------------------------------------------------
# kinship index
# ---------------------------------------------------------------------------


class TestKinshipIndex:
    def test_unrelated_is_one_for_any_pair(self, synthetic_freqs):
        a = sample_unrelated(synthetic_freqs, seed=21, profile_id="a")
        b = sample_unrelated(synthetic_freqs, seed=22, profile_id="b")
        assert kinship_index(a, b, UNRELATED, synthetic_freqs) == 1.0

    def test_identity_is_inverse_rmp_or_zero(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        same = Profile.build("c", {"L1": ("a", "b"), "L2": ("x", "y")})
        assert kinship_index(target, same, IDENTITY, small_freqs) == pytest.approx(
            1.0 / rmp(target, small_freqs), rel=1e-14
        )
        off = Profile.build("c", {"L1": ("a", "b"), "L2": ("x", "z")})
        assert kinship_index(target, off, IDENTITY, small_freqs) == 0.0

    def test_parent_child_matches_transmission_oracle(self):
        # target (a,b), candidate (a,c) with p_a = 0.1: oracle gives 1/(4 p_a) = 2.5
        fmap = {"a": 0.1, "b": 0.3, "c": 0.6}
        freqs = FrequencyTable.from_mapping({"L1": fmap})
        target = Profile.build("t", {"L1": ("a", "b")})
        candidate = Profile.build("c", {"L1": ("a", "c")})
        law = oracle_parent_child_law(("a", "b"), fmap)
        expected = law[("a", "c")] / oracle_hwe_prob(("a", "c"), fmap)
        assert expected == pytest.approx(2.5, rel=1e-12)
        ki = kinship_index(target, candidate, PARENT_CHILD, freqs)
        assert ki == pytest.approx(expected, rel=1e-12)

    def test_parent_child_full_law_matches_oracle(self, small_freqs):
        # every candidate genotype, not just one: KI == oracle law / HWE
        fmap = {"x": 0.2, "y": 0.5, "z": 0.3}
        target = Profile.build("t", {"L2": ("x", "y")})
        law = oracle_parent_child_law(("x", "y"), fmap)
        for pair in [("x", "x"), ("x", "y"), ("x", "z"), ("y", "y"), ("y", "z"), ("z", "z")]:
            candidate = Profile.build("c", {"L2": pair})
            expected = law.get(pair, 0.0) / oracle_hwe_prob(pair, fmap)
            ki = kinship_index(target, candidate, PARENT_CHILD, small_freqs)
            assert ki == pytest.approx(expected, rel=1e-12), pair

    def test_multiplicative_over_disjoint_panels(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        cand = Profile.build("c", {"L1": ("a", "a"), "L2": ("y", "z")})
        t1, c1 = Profile.build("t", {"L1": ("a", "b")}), Profile.build("c", {"L1": ("a", "a")})
        t2, c2 = Profile.build("t", {"L2": ("x", "y")}), Profile.build("c", {"L2": ("y", "z")})
        whole = kinship_index(target, cand, FULL_SIBLING, small_freqs)
        split = kinship_index(t1, c1, FULL_SIBLING, small_freqs) * kinship_index(
            t2, c2, FULL_SIBLING, small_freqs
        )
        assert whole == pytest.approx(split, rel=1e-12)

    def test_computed_over_shared_loci_only(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        cand = Profile.build("c", {"L2": ("x", "y")})
        expected = kinship_index(
            Profile.build("t", {"L2": ("x", "y")}), cand, FULL_SIBLING, small_freqs
        )
        assert kinship_index(target, cand, FULL_SIBLING, small_freqs) == expected

    def test_disjoint_panels_rejected(self, small_freqs):
        a = Profile.build("a", {"L1": ("a", "b")})
        b = Profile.build("b", {"L2": ("x", "y")})
        with pytest.raises(DisjointPanelsError):
            kinship_index(a, b, FULL_SIBLING, small_freqs)

    @settings(max_examples=50, deadline=None)
    @given(
        flip_target=st.booleans(),
        flip_candidate=st.booleans(),
        pair=st.tuples(st.sampled_from("ab"), st.sampled_from("ab")),
    )
    def test_invariant_under_allele_order(self, flip_target, flip_candidate, pair):
        freqs = FrequencyTable.from_mapping({"L1": {"a": 0.3, "b": 0.7}})
        t_pair = ("b", "a") if flip_target else ("a", "b")
        c_pair = (pair[1], pair[0]) if flip_candidate else pair
        target = Profile.build("t", {"L1": t_pair})
        cand = Profile.build("c", {"L1": c_pair})
        baseline = kinship_index(
            Profile.build("t", {"L1": ("a", "b")}),
            Profile.build("c", {"L1": canonical_genotype(*pair)}),
            FULL_SIBLING,
            freqs,
        )
        assert kinship_index(target, cand, FULL_SIBLING, freqs) == baseline


# ---------------------------------------------------------------------------
# exact enumeration: the oracle and its own properties
# ---------------------------------------------------------------------------

LADDERS = {
    "one-locus-2": {"L1": {"a": 0.3, "b": 0.7}},
    "one-locus-3": {"L1": {"a": 0.2, "b": 0.5, "c": 0.3}},
    "two-locus": {"L1": {"a": 0.3, "b": 0.7}, "L2": {"x": 0.2, "y": 0.5, "z": 0.3}},
}


def _target_for(mapping):
    genotypes = {}
    for locus, alleles in mapping.items():
        labels = sorted(alleles)
        genotypes[locus] = (labels[0], labels[min(1, len(labels) - 1)])
    return Profile.build("t", genotypes)


class TestEnumeration:
    def test_unrelated_is_point_mass_at_one(self, het_target, small_freqs):
        for model in ("relative", "population"):
            dist = enumerate_lr_distribution(het_target, UNRELATED, small_freqs, model=model)
            assert dist.values.tolist() == [1.0]
            assert dist.probs.tolist() == pytest.approx([1.0], abs=1e-12)

    def test_identity_under_population_is_two_point(self, het_target, small_freqs):
        dist = enumerate_lr_distribution(het_target, IDENTITY, small_freqs, model="population")
        p = rmp(het_target, small_freqs)
        assert dist.values.tolist() == pytest.approx([0.0, 1.0 / p], rel=1e-14)
        # the mass at 1/RMP is the target genotype's own probability, exactly
        assert dist.probs[1] == p
        assert dist.probs[0] == pytest.approx(1.0 - p, rel=1e-12)

    @pytest.mark.parametrize("ladder", sorted(LADDERS))
    @pytest.mark.parametrize("rel_name", sorted(RELATIONSHIPS))
    def test_relative_law_is_size_biased_population_law(self, ladder, rel_name):
        # P(LR(relative) = x) == x * P(LR(population) = x) at every support point
        freqs = FrequencyTable.from_mapping(LADDERS[ladder])
        target = _target_for(LADDERS[ladder])
        rel = RELATIONSHIPS[rel_name]
        d_rel = enumerate_lr_distribution(target, rel, freqs, model="relative")
        d_pop = enumerate_lr_distribution(target, rel, freqs, model="population")
        pop = dict(zip(d_pop.values.tolist(), d_pop.probs.tolist()))
        for x, p_s in zip(d_rel.values.tolist(), d_rel.probs.tolist()):
            assert abs(p_s - x * pop.get(x, 0.0)) < 1e-12, (ladder, rel_name, x)

    @pytest.mark.parametrize("ladder", sorted(LADDERS))
    @pytest.mark.parametrize("rel_name", sorted(RELATIONSHIPS))
    def test_population_mean_lr_is_one(self, ladder, rel_name):
        freqs = FrequencyTable.from_mapping(LADDERS[ladder])
        target = _target_for(LADDERS[ladder])
        dist = enumerate_lr_distribution(
            target, RELATIONSHIPS[rel_name], freqs, model="population"
        )
        assert abs(dist.mean() - 1.0) < 1e-12

    def test_monte_carlo_mean_against_unrelated_profiles(self, synthetic_freqs):
        # sampled version of the unit-mean law, within 3 standard errors
        target = sample_unrelated(synthetic_freqs, seed=31)
        values = sample_ki_values(
            target, synthetic_freqs, 40_000, seed=32, drawn_from=None, scored_as=FULL_SIBLING
        )
        se = values.std(ddof=1) / math.sqrt(values.size)
        assert abs(values.mean() - 1.0) < 3 * se

    def test_cap_exceeded(self, synthetic_freqs):
        target = sample_unrelated(synthetic_freqs, seed=33)
        with pytest.raises(EnumerationCapError):
            enumerate_lr_distribution(target, FULL_SIBLING, synthetic_freqs, model="population")

    def test_bad_model_rejected(self, het_target, small_freqs):
        with pytest.raises(ValueError):
            enumerate_lr_distribution(het_target, FULL_SIBLING, small_freqs, model="S")


class TestSampleKiValues:
    def test_single_locus_samples_live_on_exact_support(self, two_allele_freqs):
        target = Profile.build("t", {"L1": ("a", "b")})
        dist = enumerate_lr_distribution(target, FULL_SIBLING, two_allele_freqs, model="relative")
        values = sample_ki_values(
            target, two_allele_freqs, 5000, seed=41, drawn_from=FULL_SIBLING, scored_as=FULL_SIBLING
        )
        assert set(np.unique(values)) <= set(dist.values.tolist())

    def test_empirical_tails_match_enumeration(self, small_freqs, het_target):
        from scipy.stats import chisquare

        dist = enumerate_lr_distribution(het_target, FULL_SIBLING, small_freqs, model="relative")
        n = 30_000
        values = sample_ki_values(
            het_target, small_freqs, n, seed=42, drawn_from=FULL_SIBLING, scored_as=FULL_SIBLING
        )
        support = dist.values
        counts = np.array([(values == v).sum() for v in support])
        keep = dist.probs * n >= 5
        assert chisquare(counts[keep], dist.probs[keep] / dist.probs[keep].sum() * counts[keep].sum()).pvalue > 1e-3

    def test_matches_profile_level_sampling(self, small_freqs, het_target):
        # dual route: per-locus categorical sampling vs materialized profiles
        n = 4000
        direct = sample_ki_values(
            het_target, small_freqs, n, seed=43, drawn_from=FULL_SIBLING, scored_as=FULL_SIBLING
        )
        rng = derive_rng(44)
        via_profiles = np.array(
            [
                kinship_index(
                    het_target,
                    sample_relative(het_target, FULL_SIBLING, small_freqs, seed=rng),
                    FULL_SIBLING,
                    small_freqs,
                )
                for _ in range(n)
            ]
        )
        from scipy.stats import ks_2samp

        assert ks_2samp(direct, via_profiles).pvalue > 1e-3

    def test_scores_same_draws_under_multiple_relationships(self, small_freqs, het_target):
        both = sample_ki_values(
            het_target,
            small_freqs,
            1000,
            seed=45,
            drawn_from=HALF_SIBLING,
            scored_as=(FULL_SIBLING, HALF_SIBLING),
        )
        assert both.shape == (2, 1000)
        si_only = sample_ki_values(
            het_target, small_freqs, 1000, seed=45, drawn_from=HALF_SIBLING, scored_as=FULL_SIBLING
        )
        assert np.array_equal(both[0], si_only)


class TestLrDistribution:
    def test_exact_threshold_for_identity_point_mass(self, het_target, small_freqs):
        dist = enumerate_lr_distribution(het_target, IDENTITY, small_freqs, model="relative")
        expected = 1.0 / rmp(het_target, small_freqs)
        for level in (0.1, 0.5, 0.9, 1.0):
            assert dist.threshold_at(level) == pytest.approx(expected, rel=1e-14)

    def test_empirical_threshold_is_order_statistic(self):
        samples = np.array([5.0, 1.0, 4.0, 2.0, 3.0])
        dist = LrDistribution.from_samples(samples)
        # descending order stats: L(1)=5 ... L(5)=1; t_alpha = L(ceil(alpha*5))
        assert dist.threshold_at(0.2) == 5.0
        assert dist.threshold_at(0.4) == 4.0
        assert dist.threshold_at(0.6) == 3.0
        assert dist.threshold_at(1.0) == 1.0

    def test_threshold_coverage_includes_ties(self):
        dist = LrDistribution.from_samples([1.0, 2.0, 2.0, 2.0, 3.0])
        t = dist.threshold_at(0.4)
        assert t == 2.0
        assert dist.tail_prob(t) == pytest.approx(0.8)

    def test_level_zero_rejected(self, two_allele_freqs):
        target = Profile.build("t", {"L1": ("a", "b")})
        dist = enumerate_lr_distribution(target, FULL_SIBLING, two_allele_freqs, model="relative")
        with pytest.raises(ValueError):
            dist.threshold_at(0.0)

    def test_conditional_mean(self):
        dist = LrDistribution.exact_law([1.0, 2.0, 4.0], [0.5, 0.25, 0.25])
        assert dist.conditional_mean_at_least(2.0) == pytest.approx(3.0)

    def test_probability_sum_validated(self):
        with pytest.raises(ValueError):
            LrDistribution.exact_law([1.0, 2.0], [0.5, 0.4])


class TestDeriveRng:
    def test_same_key_same_stream(self):
        a = derive_rng(123, 4, 5).random(8)
        b = derive_rng(123, 4, 5).random(8)
        assert np.array_equal(a, b)

    def test_different_keys_differ(self):
        a = derive_rng(123, 4, 5).random(8)
        b = derive_rng(123, 4, 6).random(8)
        assert not np.array_equal(a, b)

    def test_generator_passthrough_rejects_keys(self):
        rng = derive_rng(1)
        with pytest.raises(ValueError):
            derive_rng(rng, 2)

"""Posterior engine: normalization, special cases, and the direct-match fixtures."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kinscan.database import ProfileDatabase
from kinscan.errors import DataValidationError, DegenerateEvidenceError
from kinscan.genetics import (
    FULL_SIBLING,
    HALF_SIBLING,
    IDENTITY,
    UNRELATED,
    FrequencyTable,
    Profile,
    kinship_index,
    rmp,
    sample_unrelated,
)
from kinscan.inference import (
    LrVector,
    PriorVector,
    compute_lr_vector,
    db_lr,
    db_lr_uniform,
    member_lr,
    member_lr_uniform,
    posterior,
    posterior_given_in_db,
    subset_posterior,
)


def vec(*values):
    return LrVector(tuple(f"m{k}" for k in range(len(values))), np.array(values, dtype=float))


def priors_of(*values):
    return PriorVector(tuple(f"m{k}" for k in range(len(values))), np.array(values, dtype=float))


class TestPosterior:
    def test_two_member_worked_example(self):
        # N=2, priors (1/4, 1/4) so pi_0 = 1/2, r = (3, 1)
        post = posterior(vec(3.0, 1.0), priors_of(0.25, 0.25))
        assert post["m0"] == 0.5
        assert post["m1"] == pytest.approx(1.0 / 6.0, rel=1e-14)
        assert post.outside == pytest.approx(1.0 / 3.0, rel=1e-14)

    def test_zero_lr_means_zero_posterior(self):
        post = posterior(vec(0.0, 5.0), priors_of(0.4, 0.1))
        assert post["m0"] == 0.0

    def test_all_zero_evidence_concentrates_outside(self):
        post = posterior(vec(0.0, 0.0), priors_of(0.25, 0.25))
        assert post.outside == 1.0
        assert post["m0"] == 0.0

    def test_degenerate_when_pi0_zero_too(self):
        with pytest.raises(DegenerateEvidenceError):
            posterior(vec(0.0, 0.0), priors_of(0.5, 0.5))

    def test_normalization_large_heavy_tailed(self):
        rng = np.random.default_rng(1)
        n = 100_000
        r = np.exp(rng.uniform(-8, 35, n))  # KI values spanning ~1e-3..1e15
        pri = rng.random(n)
        pri = pri / pri.sum() * 0.8
        ids = tuple(f"m{k}" for k in range(n))
        post = posterior(LrVector(ids, r), PriorVector(ids, pri))
        assert abs(post.total() - 1.0) < 1e-12

    def test_tie_symmetry(self):
        post = posterior(vec(2.5, 2.5, 1.0), priors_of(0.2, 0.2, 0.1))
        assert post["m0"] == post["m1"]

    def test_aligns_priors_by_id(self):
        lr = vec(3.0, 1.0)
        shuffled = PriorVector(("m1", "m0"), np.array([0.25, 0.25]))
        assert posterior(lr, shuffled)["m0"] == 0.5

    def test_mismatched_ids_rejected(self):
        lr = vec(3.0, 1.0)
        with pytest.raises(DataValidationError):
            posterior(lr, PriorVector(("x0", "x1"), np.array([0.25, 0.25])))

    @settings(max_examples=40, deadline=None)
    @given(
        r=st.lists(st.floats(0.0, 1e12), min_size=1, max_size=30),
        pi_d=st.floats(0.01, 1.0),
    )
    def test_normalization_property(self, r, pi_d):
        ids = tuple(f"m{k}" for k in range(len(r)))
        lr = LrVector(ids, np.array(r))
        pri = PriorVector.uniform(ids, pi_d)
        if all(x == 0.0 for x in r) and pri.pi_0 == 0.0:
            return
        post = posterior(lr, pri)
        assert abs(post.total() - 1.0) < 1e-12


class TestPosteriorGivenInDb:
    def test_worked_example(self):
        post = posterior_given_in_db(vec(3.0, 1.0), priors_of(0.5, 0.5))
        assert post["m0"] == 0.75
        assert post["m1"] == 0.25
        assert post.outside == 0.0

    def test_prior_scale_invariance(self):
        a = posterior_given_in_db(vec(3.0, 1.0), priors_of(0.5, 0.25))
        b = posterior_given_in_db(vec(3.0, 1.0), priors_of(0.2, 0.1))
        assert a["m0"] == pytest.approx(b["m0"], rel=1e-14)

    def test_agrees_with_renormalized_unconditional(self):
        lr = vec(3.0, 1.0, 0.5)
        pri = priors_of(0.2, 0.15, 0.25)
        full = posterior(lr, pri)
        cond = posterior_given_in_db(lr, pri)
        in_db = 1.0 - full.outside
        for member in lr.ids:
            assert cond[member] == pytest.approx(full[member] / in_db, rel=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateEvidenceError):
            posterior_given_in_db(vec(0.0, 0.0), priors_of(0.2, 0.2))


class TestSubsetPosterior:
    def test_empty_subset(self):
        assert subset_posterior(vec(3.0, 1.0), priors_of(0.25, 0.25), []) == 0.0

    def test_full_database_complements_outside(self):
        lr, pri = vec(3.0, 1.0, 2.0), priors_of(0.2, 0.2, 0.2)
        post = posterior(lr, pri)
        assert subset_posterior(lr, pri, lr.ids) == pytest.approx(1.0 - post.outside, rel=1e-12)

    def test_singleton_matches_posterior_entry(self):
        lr, pri = vec(3.0, 1.0), priors_of(0.25, 0.25)
        assert subset_posterior(lr, pri, ["m0"]) == posterior(lr, pri)["m0"]

    def test_unknown_id_rejected(self):
        with pytest.raises(ValueError):
            subset_posterior(vec(1.0), priors_of(0.5), ["nope"])


class TestDbLr:
    def test_all_ones_is_one_for_any_priors(self):
        assert db_lr(vec(1.0, 1.0, 1.0), priors_of(0.1, 0.2, 0.3)) == pytest.approx(1.0, rel=1e-14)

    def test_uniform_average(self):
        lr = vec(4.0, 0.0, 0.0, 0.0)
        assert db_lr(lr, PriorVector.uniform(lr.ids, 0.5)) == pytest.approx(1.0, rel=1e-14)
        assert db_lr_uniform(lr) == 1.0

    def test_direct_match_power_of_two_fixture(self):
        # single matching member with r = 1/p, everyone else excluded:
        # the database LR must equal 1/(N p) exactly.
        n_pop = 2**12
        n_db = 2**10
        p = 2.0**-20
        pi_d = n_db / n_pop  # 0.25, exactly representable
        r = np.zeros(n_db)
        r[3] = 1.0 / p
        ids = tuple(f"m{k}" for k in range(n_db))
        lr = LrVector(ids, r)
        pri = PriorVector.uniform(ids, pi_d)
        assert db_lr(lr, pri) == 1.0 / (n_db * p)

    def test_uniform_special_case_agreement(self):
        rng = np.random.default_rng(3)
        r = np.exp(rng.uniform(-5, 20, 500))
        ids = tuple(f"m{k}" for k in range(500))
        lr = LrVector(ids, r)
        general = db_lr(lr, PriorVector.uniform(ids, 0.37))
        assert general == pytest.approx(db_lr_uniform(lr), rel=1e-10)

    def test_zero_prior_mass_rejected(self):
        with pytest.raises(DegenerateEvidenceError):
            db_lr(vec(1.0), PriorVector.uniform(("m0",), 0.0))


class TestMemberLr:
    def test_direct_match_reduction(self):
        # one match r_i = 1/p in a size-N database drawn from a population of
        # size n with pi_D = N/n: member LR = (n-1) / (p (n-N)), exactly.
        n_pop = 2**12
        n_db = 2**10
        p = 2.0**-20
        r = np.zeros(n_db)
        r[0] = 1.0 / p
        ids = tuple(f"m{k}" for k in range(n_db))
        lr = LrVector(ids, r)
        pri = PriorVector.uniform(ids, n_db / n_pop)
        expected = (n_pop - 1) / (p * (n_pop - n_db))
        assert member_lr(lr, pri, "m0") == expected

    def test_symmetric_pair_is_one(self):
        lr = vec(2.0, 2.0)
        assert member_lr(lr, PriorVector.uniform(lr.ids, 1.0), "m0") == pytest.approx(1.0, rel=1e-14)

    def test_three_to_one(self):
        lr = vec(3.0, 1.0)
        assert member_lr(lr, PriorVector.uniform(lr.ids, 1.0), "m0") == pytest.approx(3.0, rel=1e-14)

    def test_uniform_formula_agrees_with_general(self):
        rng = np.random.default_rng(4)
        r = np.exp(rng.uniform(-5, 20, 200))
        ids = tuple(f"m{k}" for k in range(200))
        lr = LrVector(ids, r)
        for pi_d in (0.2, 0.8, 1.0):
            pri = PriorVector.uniform(ids, pi_d)
            for member in ("m0", "m17", "m199"):
                assert member_lr(lr, pri, member) == pytest.approx(
                    member_lr_uniform(lr, member, pi_d), rel=1e-10
                )

    def test_posterior_odds_consistency(self):
        rng = np.random.default_rng(5)
        r = np.exp(rng.uniform(-3, 10, 50))
        pri_values = rng.random(50)
        pri_values = pri_values / pri_values.sum() * 0.7
        ids = tuple(f"m{k}" for k in range(50))
        lr, pri = LrVector(ids, r), PriorVector(ids, pri_values)
        post = posterior(lr, pri)
        for k, member in enumerate(ids[:10]):
            odds = post[member] / (1.0 - post[member])
            prior_odds = pri_values[k] / (1.0 - pri_values[k])
            assert odds == pytest.approx(member_lr(lr, pri, member) * prior_odds, rel=1e-10)


class TestRemarkFunctionOfInputs:
    def test_same_lr_vector_same_posterior_whatever_the_relationship(self, two_allele_freqs):
        # a half-sibling index of exactly 1 == an unrelated index of exactly 1:
        # the posterior depends only on (r, priors)
        target = Profile.build("t", {"L1": ("a", "b")})
        member = Profile.build("m0", {"L1": ("a", "b")})
        db = ProfileDatabase.from_profiles([member], two_allele_freqs)
        lr_unrelated = compute_lr_vector(target, db, UNRELATED)
        # HS factor at (a,b) vs (a,b) with p=(0.3,0.7): 0.5 + 0.5 * 1 = 1.0... only
        # for p=(0.5,0.5); use that table instead
        freqs_half = FrequencyTable.from_mapping({"L1": {"a": 0.5, "b": 0.5}})
        db_half = ProfileDatabase.from_profiles([member], freqs_half)
        lr_half = compute_lr_vector(target, db_half, HALF_SIBLING)
        assert lr_unrelated.values.tolist() == lr_half.values.tolist() == [1.0]
        pri = PriorVector.uniform(("m0",), 0.5)
        assert posterior(lr_unrelated, pri).probabilities.tolist() == posterior(
            lr_half, pri
        ).probabilities.tolist()


class TestComputeLrVector:
    def test_identity_single_member(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        member = Profile.build("m0", {"L1": ("a", "b"), "L2": ("x", "y")})
        lr = compute_lr_vector(target, [member], IDENTITY, small_freqs)
        assert lr.values.tolist() == [kinship_index(target, member, IDENTITY, small_freqs)]

    def test_unrelated_all_ones(self, synthetic_freqs):
        from kinscan.database import sample_database

        db = sample_database(synthetic_freqs, 25, seed=9)
        target = sample_unrelated(synthetic_freqs, seed=10)
        lr = compute_lr_vector(target, db, UNRELATED)
        assert lr.values.tolist() == [1.0] * 25
        assert lr.ids == tuple(db.ids)

    def test_empty_database_rejected(self, synthetic_freqs):
        target = sample_unrelated(synthetic_freqs, seed=11)
        with pytest.raises(DataValidationError):
            compute_lr_vector(target, [], FULL_SIBLING, synthetic_freqs)

    def test_error_names_offending_member(self, small_freqs):
        target = Profile.build("t", {"L1": ("a", "b")})
        bad = Profile.build("bad-member", {"L1": ("a", "q")})
        with pytest.raises(DataValidationError, match="bad-member"):
            compute_lr_vector(target, [bad], FULL_SIBLING, small_freqs)

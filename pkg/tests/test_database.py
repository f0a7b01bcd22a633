"""Encoded databases: scans vs the single-pair reference path, IBS, panels."""

import numpy as np
import pytest

from kinscan.database import ProfileDatabase, sample_database
from kinscan.errors import DataValidationError, DisjointPanelsError
from kinscan.genetics import (
    FULL_SIBLING,
    HALF_SIBLING,
    IDENTITY,
    PARENT_CHILD,
    UNRELATED,
    Profile,
    derive_rng,
    kinship_index,
    sample_unrelated,
)

from test_genetics import oracle_ibs


@pytest.fixture
def mixed_db(small_freqs):
    """Nine profiles over three panels (L1 only, L2 only, both)."""
    rng = derive_rng(77)
    profiles = []
    for k in range(3):
        profiles.append(sample_unrelated(small_freqs, loci=("L1",), seed=rng, profile_id=f"a{k}", panel="P1"))
    for k in range(3):
        profiles.append(sample_unrelated(small_freqs, loci=("L2",), seed=rng, profile_id=f"b{k}", panel="P2"))
    for k in range(3):
        profiles.append(sample_unrelated(small_freqs, seed=rng, profile_id=f"c{k}", panel="P12"))
    return ProfileDatabase.from_profiles(profiles, small_freqs)


class TestConstruction:
    def test_duplicate_id_rejected(self, small_freqs):
        p = Profile.build("dup", {"L1": ("a", "b")})
        q = Profile.build("dup", {"L1": ("a", "a")})
        with pytest.raises(DataValidationError, match="dup"):
            ProfileDatabase.from_profiles([p, q], small_freqs)

    def test_unknown_allele_names_profile_and_locus(self, small_freqs):
        p = Profile.build("p1", {"L1": ("a", "q")})
        with pytest.raises(DataValidationError) as err:
            ProfileDatabase.from_profiles([p], small_freqs)
        assert "p1" in str(err.value) and "L1" in str(err.value)

    def test_empty_rejected(self, small_freqs):
        with pytest.raises(DataValidationError):
            ProfileDatabase.from_profiles([], small_freqs)

    def test_panel_grouping(self, mixed_db):
        assert len(mixed_db) == 9
        assert {part.name for part in mixed_db.parts} == {"P1", "P2", "P12"}
        panels = mixed_db.member_panels()
        assert panels[0] == "P1" and panels[3] == "P2" and panels[8] == "P12"

    def test_round_trip_profiles(self, small_freqs, mixed_db):
        rebuilt = ProfileDatabase.from_profiles(mixed_db.to_profiles(), small_freqs)
        assert rebuilt.to_profiles() == mixed_db.to_profiles()
        assert rebuilt.ids == mixed_db.ids


class TestScan:
    @pytest.mark.parametrize("rel", [UNRELATED, PARENT_CHILD, FULL_SIBLING, HALF_SIBLING, IDENTITY])
    def test_scan_matches_single_pair_reference(self, small_freqs, mixed_db, rel):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        values = mixed_db.scan(target, rel)
        profiles = mixed_db.to_profiles()
        for k, prof in enumerate(profiles):
            assert values[k] == kinship_index(target, prof, rel, small_freqs), prof.id

    def test_scan_larger_random_database(self, synthetic_freqs):
        db = sample_database(synthetic_freqs, 300, seed=88)
        target = sample_unrelated(synthetic_freqs, seed=89)
        values = db.scan(target, FULL_SIBLING)
        profiles = db.to_profiles()
        reference = np.array(
            [kinship_index(target, prof, FULL_SIBLING, synthetic_freqs) for prof in profiles]
        )
        assert np.array_equal(values, reference)

    def test_worker_count_does_not_change_output(self, synthetic_freqs):
        db = sample_database(synthetic_freqs, 1000, seed=90)
        target = sample_unrelated(synthetic_freqs, seed=91)
        base = db.scan(target, FULL_SIBLING, workers=1)
        for workers in (2, 4, 7):
            assert np.array_equal(base, db.scan(target, FULL_SIBLING, workers=workers))

    def test_disjoint_part_rejected(self, small_freqs, mixed_db):
        target = Profile.build("t", {"L1": ("a", "b")})
        with pytest.raises(DisjointPanelsError, match="P2"):
            mixed_db.scan(target, FULL_SIBLING)


class TestIbsCounts:
    def test_matches_multiset_oracle(self, small_freqs, mixed_db):
        target = Profile.build("t", {"L1": ("a", "b"), "L2": ("x", "y")})
        counts = mixed_db.ibs_counts(target)
        for k, prof in enumerate(mixed_db.to_profiles()):
            expected = sum(
                oracle_ibs(target.genotypes[locus], prof.genotypes[locus])
                for locus in prof.genotypes
                if locus in target.genotypes
            )
            assert counts[k] == expected, prof.id

    def test_single_locus_cases(self, small_freqs):
        target = Profile.build("t", {"L2": ("x", "y")})
        cases = {
            ("x", "y"): 2,
            ("x", "x"): 1,
            ("x", "z"): 1,
            ("y", "z"): 1,
            ("z", "z"): 0,
        }
        profiles = [Profile.build(f"p{k}", {"L2": pair}) for k, pair in enumerate(cases)]
        db = ProfileDatabase.from_profiles(profiles, small_freqs)
        assert db.ibs_counts(target).tolist() == list(cases.values())


class TestSampleDatabase:
    def test_deterministic(self, synthetic_freqs):
        a = sample_database(synthetic_freqs, 20, seed=5)
        b = sample_database(synthetic_freqs, 20, seed=5)
        assert a.to_profiles() == b.to_profiles()

    def test_matches_profile_sampler_distribution(self, synthetic_freqs):
        # encoded batch sampling and one-at-a-time profile sampling share the law
        from scipy.stats import chisquare

        db = sample_database(synthetic_freqs, 30_000, seed=6, loci=("TH01",))
        genos = {}
        for prof in db.to_profiles():
            g = prof.genotypes["TH01"]
            genos[g] = genos.get(g, 0) + 1
        lf = synthetic_freqs.locus("TH01")
        fmap = dict(zip(lf.alleles, lf.freqs.tolist()))
        labels = sorted(genos)
        observed = [genos[g] for g in labels]
        expected = [
            30_000 * fmap[a] * fmap[b] * (2.0 if a != b else 1.0) for a, b in labels
        ]
        assert chisquare(observed, [e * sum(observed) / sum(expected) for e in expected]).pvalue > 1e-3

    def test_size_validated(self, synthetic_freqs):
        with pytest.raises(ValueError):
            sample_database(synthetic_freqs, 0, seed=1)

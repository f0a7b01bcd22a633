import pytest

from kinscan.genetics import FrequencyTable, Profile
from kinscan.io import read_frequency_csv
from kinscan.cli import DEFAULT_FREQS


@pytest.fixture
def two_allele_freqs():
    """One locus, two alleles: the smallest non-trivial enumerable ladder."""
    return FrequencyTable.from_mapping({"L1": {"a": 0.3, "b": 0.7}})


@pytest.fixture
def small_freqs():
    """Two loci (2 and 3 alleles): enumerable multi-locus ladder."""
    return FrequencyTable.from_mapping(
        {
            "L1": {"a": 0.3, "b": 0.7},
            "L2": {"x": 0.2, "y": 0.5, "z": 0.3},
        }
    )


@pytest.fixture
def het_target(small_freqs):
    return Profile.build("t0", {"L1": ("a", "b"), "L2": ("x", "y")})


@pytest.fixture(scope="session")
def synthetic_freqs():
    """The bundled synthetic 10-locus panel."""
    return read_frequency_csv(DEFAULT_FREQS)

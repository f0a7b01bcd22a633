"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage problems exit 2, data
validation failures exit 3, numeric degeneracies exit 4.
"""


class KinscanError(Exception):
    """Base class for all package-specific errors."""


class DataValidationError(KinscanError):
    """Malformed or inconsistent input data (bad file, unknown allele, duplicate id)."""


class DisjointPanelsError(DataValidationError):
    """Two profiles share no typed locus, so no kinship index exists."""


class DegenerateEvidenceError(KinscanError):
    """A posterior or likelihood-ratio denominator is exactly zero."""


class EnumerationCapError(KinscanError):
    """Exact enumeration would exceed the genotype-combination cap; fall back to sampling."""

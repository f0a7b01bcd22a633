"""Immutable, scan-ready profile databases.

Profiles are grouped into panel parts (one part per distinct locus set) and
genotypes are encoded per locus as integer codes into the allelic ladder,
so a full-database kinship-index scan reduces to one table gather and one
multiply per locus.  Databases are immutable after construction and safe to
share across threads; the optional worker split of `scan` writes disjoint
output slices and is bit-deterministic for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .errors import DataValidationError, DisjointPanelsError
from .genetics import (
    FrequencyTable,
    Profile,
    Relationship,
    _locus_table,
    canonical_genotype,
    derive_rng,
)

__all__ = ["PanelPart", "ProfileDatabase", "sample_database"]


class PanelPart:
    """Members sharing one typed locus set, encoded for vectorized scans."""

    __slots__ = ("name", "loci", "ids", "positions", "codes", "ladder_sizes")

    def __init__(
        self,
        name: str,
        loci: tuple[str, ...],
        ids: list[str],
        positions: np.ndarray,
        codes: dict[str, np.ndarray],
        ladder_sizes: dict[str, int],
    ):
        self.name = name
        self.loci = loci
        self.ids = ids
        self.positions = positions
        self.codes = codes
        self.ladder_sizes = ladder_sizes

    def __len__(self) -> int:
        return len(self.ids)


class ProfileDatabase:
    """A fixed collection of profiles bound to one frequency table."""

    def __init__(self, freqs: FrequencyTable, parts: list[PanelPart], ids: list[str]):
        self.freqs = freqs
        self.parts = parts
        self._ids = ids

    @classmethod
    def from_profiles(cls, profiles: Sequence[Profile], freqs: FrequencyTable) -> "ProfileDatabase":
        if not profiles:
            raise DataValidationError("empty profile database")
        seen: set[str] = set()
        groups: dict[tuple[str, ...], list[tuple[int, Profile]]] = {}
        for pos, prof in enumerate(profiles):
            if prof.id in seen:
                raise DataValidationError(f"duplicate profile id {prof.id!r}")
            seen.add(prof.id)
            groups.setdefault(prof.loci, []).append((pos, prof))

        parts: list[PanelPart] = []
        ids: list[str] = [p.id for p in profiles]
        for k, (loci, rows) in enumerate(groups.items()):
            name = next((prof.panel for _, prof in rows if prof.panel), f"panel-{k + 1}")
            positions = np.array([pos for pos, _ in rows], dtype=np.int64)
            codes: dict[str, np.ndarray] = {}
            sizes: dict[str, int] = {}
            for locus in loci:
                lf = freqs.locus(locus)
                m = len(lf)
                arr = np.empty(len(rows), dtype=np.int64)
                for r, (_, prof) in enumerate(rows):
                    try:
                        i = lf.index(prof.genotypes[locus][0])
                        j = lf.index(prof.genotypes[locus][1])
                    except DataValidationError as exc:
                        raise DataValidationError(f"profile {prof.id!r}: {exc}") from None
                    lo, hi = (i, j) if i <= j else (j, i)
                    arr[r] = lo * m + hi
                codes[locus] = arr
                sizes[locus] = m
            parts.append(PanelPart(name, loci, [prof.id for _, prof in rows], positions, codes, sizes))
        return cls(freqs, parts, ids)

    def __len__(self) -> int:
        return len(self._ids)

    @property
    def ids(self) -> list[str]:
        return list(self._ids)

    def member_panels(self) -> list[str]:
        out = [""] * len(self._ids)
        for part in self.parts:
            for pos in part.positions:
                out[int(pos)] = part.name
        return out

    def to_profiles(self) -> list[Profile]:
        out: list[Profile | None] = [None] * len(self._ids)
        for part in self.parts:
            decoded: dict[str, list[tuple[str, str]]] = {}
            for locus in part.loci:
                lf = self.freqs.locus(locus)
                m = len(lf)
                lo, hi = np.divmod(part.codes[locus], m)
                decoded[locus] = [
                    canonical_genotype(lf.alleles[int(i)], lf.alleles[int(j)])
                    for i, j in zip(lo, hi)
                ]
            for r, pos in enumerate(part.positions):
                genotypes = {locus: decoded[locus][r] for locus in part.loci}
                out[int(pos)] = Profile(part.ids[r], part.name, genotypes)
        return [p for p in out if p is not None]

    def _shared_loci(self, part: PanelPart, target: Profile) -> tuple[str, ...]:
        shared = tuple(locus for locus in part.loci if locus in target.genotypes)
        if not shared:
            raise DisjointPanelsError(
                f"panel {part.name!r} (e.g. member {part.ids[0]!r}) shares no locus with the target"
            )
        return shared

    def scan(
        self,
        target: Profile,
        rel: Relationship,
        *,
        workers: int = 1,
    ) -> np.ndarray:
        """Kinship index of every member against `target`, in database order.

        Each panel part is scored over the loci it shares with the target.
        The scan is embarrassingly parallel; results are identical for any
        `workers` value.
        """
        out = np.empty(len(self._ids))
        for part in self.parts:
            shared = self._shared_loci(part, target)
            tables = [
                _locus_table(self.freqs.locus(locus), target.genotypes[locus], rel).dense_values()
                for locus in shared
            ]

            def fill(lo: int, hi: int, part=part, shared=shared, tables=tables) -> None:
                acc = np.ones(hi - lo)
                for locus, dense in zip(shared, tables):
                    acc *= dense[part.codes[locus][lo:hi]]
                out[part.positions[lo:hi]] = acc

            n = len(part)
            if workers <= 1 or n < 2 * workers:
                fill(0, n)
            else:
                step = -(-n // workers)
                bounds = [(s, min(s + step, n)) for s in range(0, n, step)]
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    list(pool.map(lambda b: fill(*b), bounds))
        return out

    def ibs_counts(self, target: Profile) -> np.ndarray:
        """Total shared-allele count with the target, summed over shared loci.

        Per locus: 2 if the genotypes are identical, 1 if exactly one allele
        label is shared (counting multiplicity), else 0.
        """
        from .genetics import UNRELATED

        out = np.zeros(len(self._ids), dtype=np.int64)
        for part in self.parts:
            shared = self._shared_loci(part, target)
            acc = np.zeros(len(part), dtype=np.int64)
            for locus in shared:
                dense = _locus_table(self.freqs.locus(locus), target.genotypes[locus], UNRELATED).dense_ibs()
                acc += dense[part.codes[locus]]
            out[part.positions] = acc
        return out


def sample_database(
    freqs: FrequencyTable,
    n: int,
    *,
    seed: int | np.random.Generator,
    loci: Sequence[str] | None = None,
    id_prefix: str = "m",
    panel: str = "",
) -> ProfileDatabase:
    """n random population members on one panel, generated in encoded form."""
    if n < 1:
        raise ValueError("database size must be >= 1")
    names = tuple(loci) if loci is not None else freqs.loci
    if not names:
        raise ValueError("empty locus panel")
    rng = derive_rng(seed)
    ids = [f"{id_prefix}{k:06d}" for k in range(n)]
    codes: dict[str, np.ndarray] = {}
    sizes: dict[str, int] = {}
    for locus in names:
        lf = freqs.locus(locus)
        m = len(lf)
        i = lf.sample_indices(n, rng)
        j = lf.sample_indices(n, rng)
        lo = np.minimum(i, j)
        hi = np.maximum(i, j)
        codes[locus] = lo * m + hi
        sizes[locus] = m
    loci_key = tuple(sorted(names))
    part = PanelPart(panel or "panel-1", loci_key, ids, np.arange(n, dtype=np.int64), codes, sizes)
    return ProfileDatabase(freqs, [part], ids)

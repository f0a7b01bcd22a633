"""Desk-scale simulation experiments validating the search strategies.

Each experiment returns an :class:`ExperimentReport` holding per-trial rows,
aggregate statistics that are recomputable from those rows (the merge tool
and the self-audit tests rely on this), and named (x, y) curves ready to be
written as plot-data CSVs or rendered to figures by the CLI layer.

All experiments are driven by a single seed; per-target and per-phase
generators are derived with counter-based keys, so reports are bit-identical
across reruns and worker layouts.  Production-scale reference values from a
10-locus, N = 99,979 casework database are attached to the relevant reports
as annotations only; they depend on confidential allele frequencies and are
not reproducible with the synthetic tables shipped here.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .database import ProfileDatabase, sample_database
from .errors import DataValidationError
from .genetics import (
    FULL_SIBLING,
    HALF_SIBLING,
    FrequencyTable,
    Profile,
    Relationship,
    derive_rng,
    relationship_by_name,
    rmp,
    sample_ki_values,
    sample_unrelated,
)

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_RANK_GRID",
    "EXPERIMENTS",
    "default_config",
    "run_experiment",
    "run_total_lr",
    "run_pod",
    "run_resampled_efficiency",
    "run_rank_cdf",
    "run_subset_sizes",
    "run_half_sibling",
    "merge_reports",
    "TOTAL_LR_REFERENCE",
    "RESAMPLED_REFERENCE",
    "RANK_REFERENCE",
    "SUBSET_SIZE_REFERENCE",
]

# 25-point alpha grid: 0.04, 0.08, ..., 1.0
DEFAULT_ALPHA_GRID: tuple[float, ...] = tuple(round(0.04 * k, 2) for k in range(1, 26))
DEFAULT_RANK_GRID: tuple[int, ...] = (1, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000)

# Observed in a production-scale (N = 99,979, ten-locus) casework run; kept as
# annotations for orientation, not as test oracles: they depend on that
# database's confidential allele frequencies.
TOTAL_LR_REFERENCE = {
    "n_db": 99_979,
    "mean_total_parent_child": 102_200.0,
    "sd_total_parent_child": 94_500.0,
    "mean_total_sibling": 93_500.0,
    "sd_total_sibling": 42_200.0,
}
RESAMPLED_REFERENCE = {"n_db": 100_000, "mean_difference": -0.0022, "max_abs_difference": 0.0084}
RANK_REFERENCE = {"n_db": 99_979, "top_1": 0.31, "top_10": 0.52, "top_100": 0.73, "top_200": 0.79}
SUBSET_SIZE_REFERENCE = {"n_db": 99_979, "mean_sizes": {"0.7": 85.0, "0.8": 258.0, "0.9": 1038.0}}

_DOM_DB = 0
_DOM_TARGET = 1
_DOM_RELATIVES = 2
_DOM_THRESHOLD = 3
_DOM_FRESH_RELATIVES = 4
_DOM_FRESH_DB = 5


@dataclass(frozen=True)
class ExperimentConfig:
    """Sizing and seeding of one simulation experiment."""

    experiment: str
    db_size: int = 10_000
    n_targets: int = 50
    n_relatives: int = 100
    relationship: str = "sibling"
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    rank_grid: tuple[int, ...] = DEFAULT_RANK_GRID
    threshold_samples: int = 20_000
    seed: int = 0
    freqs_path: str | None = None

    def __post_init__(self) -> None:
        for name, count in (
            ("db_size", self.db_size),
            ("n_targets", self.n_targets),
            ("n_relatives", self.n_relatives),
            ("threshold_samples", self.threshold_samples),
        ):
            if count < 1:
                raise ValueError(f"{name} must be >= 1, got {count}")
        grid = tuple(float(a) for a in self.alpha_grid)
        if not grid or any(not (0.0 <= a <= 1.0) for a in grid):
            raise ValueError("alpha_grid must be a non-empty subset of [0, 1]")
        object.__setattr__(self, "alpha_grid", grid)
        object.__setattr__(self, "rank_grid", tuple(int(n) for n in self.rank_grid))
        relationship_by_name(self.relationship)

    def echo(self) -> dict:
        d = asdict(self)
        d["alpha_grid"] = list(self.alpha_grid)
        d["rank_grid"] = list(self.rank_grid)
        return d


def config_hash(config: Mapping) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(eq=False)
class ExperimentReport:
    """Rows, aggregates and plot curves of one experiment run."""

    experiment: str
    config: dict
    seed: int | list[int]
    config_hash: str
    rows: list[dict]
    aggregates: dict
    curves: dict[str, dict]
    references: dict | None = None

    def recompute_aggregates(self) -> tuple[dict, dict]:
        """Re-derive aggregates and curves from the stored rows (self-audit)."""
        return _AGGREGATORS[self.experiment](self.rows, self.config)

    def to_dict(self, include_rows: bool = False) -> dict:
        d = {
            "experiment": self.experiment,
            "config": self.config,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "aggregates": self.aggregates,
            "curves": self.curves,
            "references": self.references,
        }
        if include_rows:
            d["rows"] = self.rows
        return d


def _curve(x_label: str, y_label: str, points: Sequence[tuple[float, float]], kind: str = "line") -> dict:
    return {
        "x_label": x_label,
        "y_label": y_label,
        "kind": kind,
        "points": [[float(x), float(y)] for x, y in points],
    }


def _sd(values: Sequence[float]) -> float:
    arr = np.asarray(values, dtype=np.float64)
    return float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0


def _group_by_target(rows: Sequence[Mapping]) -> dict[int, list[Mapping]]:
    groups: dict[int, list[Mapping]] = {}
    for row in rows:
        groups.setdefault(int(row["target"]), []).append(row)
    return groups


def _report(
    config: ExperimentConfig,
    rows: list[dict],
    references: dict | None,
) -> ExperimentReport:
    echo = config.echo()
    aggregates, curves = _AGGREGATORS[config.experiment](rows, echo)
    return ExperimentReport(
        experiment=config.experiment,
        config=echo,
        seed=config.seed,
        config_hash=config_hash(echo),
        rows=rows,
        aggregates=aggregates,
        curves=curves,
        references=references,
    )


# ---------------------------------------------------------------------------
# shared sampling machinery
# ---------------------------------------------------------------------------


def _sample_target(config: ExperimentConfig, freqs: FrequencyTable, i: int) -> Profile:
    return sample_unrelated(
        freqs, seed=derive_rng(config.seed, _DOM_TARGET, i), profile_id=f"t{i:04d}"
    )


def _extension_stats(
    db_ki: np.ndarray, rel_values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exclusion level and rank of each planted relative against a fixed scan.

    The exclusion level of a planted relative with index v is the weighted
    share of database members scoring strictly above v, within the database
    extended by the relative (uniform priors): the largest selection level
    at which the relative is still excluded by the conditional method.
    Rank is 1 + the number of database members strictly above v.
    """
    asc = np.sort(db_ki)
    suffix = np.concatenate([np.cumsum(asc[::-1])[::-1], [0.0]])
    pos = np.searchsorted(asc, rel_values, side="right")
    exclusion = suffix[pos] / (suffix[0] + rel_values)
    ranks = asc.size - pos + 1
    return exclusion, ranks


# ---------------------------------------------------------------------------
# total likelihood ratio
# ---------------------------------------------------------------------------


def run_total_lr(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    """Sum of kinship indices of random targets against a relative-free database.

    For any target, a random member's index has expectation 1, so the total
    is expected to equal the database size; a total far above it is the
    working signal that a relative may be present.
    """
    freqs = _resolve_freqs(config, freqs)
    rel = relationship_by_name(config.relationship)
    db = sample_database(freqs, config.db_size, seed=derive_rng(config.seed, _DOM_DB))
    rows = []
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        ki = db.scan(target, rel)
        total = float(math.fsum(ki.tolist()))
        rows.append(
            {
                "target": i,
                "target_rmp": rmp(target, freqs),
                "ki_total": total,
                "ratio": total / config.db_size,
            }
        )
    return _report(config, rows, TOTAL_LR_REFERENCE)


def _aggregate_total_lr(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    totals = [float(r["ki_total"]) for r in rows]
    ratios = [float(r["ratio"]) for r in rows]
    n = len(rows)
    aggregates = {
        "n_targets": n,
        "db_size": int(config["db_size"]),
        "mean_total": float(np.mean(totals)),
        "sd_total": _sd(totals),
        "mean_ratio": float(np.mean(ratios)),
        "sd_ratio": _sd(ratios),
        "se_ratio": _sd(ratios) / math.sqrt(n) if n else 0.0,
    }
    points = [(float(r["target"]), float(r["ratio"])) for r in rows]
    curves = {
        "total_ratio_by_target": _curve("target index", "total KI / N", points, kind="scatter"),
    }
    return aggregates, curves


# ---------------------------------------------------------------------------
# probability of detection on a fixed database
# ---------------------------------------------------------------------------


def _pod_rows(
    config: ExperimentConfig,
    freqs: FrequencyTable,
    *,
    phase: str | None,
) -> list[dict]:
    rel = relationship_by_name(config.relationship)
    db = sample_database(freqs, config.db_size, seed=derive_rng(config.seed, _DOM_DB))
    rows = []
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        target_rmp = rmp(target, freqs)
        db_ki = db.scan(target, rel)
        rel_values = sample_ki_values(
            target,
            freqs,
            config.n_relatives,
            seed=derive_rng(config.seed, _DOM_RELATIVES, i),
            drawn_from=rel,
            scored_as=rel,
        )
        exclusion, ranks = _extension_stats(db_ki, rel_values)
        for j in range(config.n_relatives):
            row = {
                "target": i,
                "relative": j,
                "target_rmp": target_rmp,
                "relative_ki": float(rel_values[j]),
                "exclusion_alpha": float(exclusion[j]),
                "rank": int(ranks[j]),
            }
            if phase is not None:
                row["phase"] = phase
            rows.append(row)
    return rows


def run_pod(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    """Probability of detection: planted relatives against one fixed database.

    For each (target, relative) pair the database is extended by the
    relative and the exclusion level is computed under uniform priors; a
    relative is caught by the conditional method at level alpha exactly
    when its exclusion level is below alpha.
    """
    freqs = _resolve_freqs(config, freqs)
    rows = _pod_rows(config, freqs, phase=None)
    return _report(config, rows, None)


def _detection_matrix(
    rows: Sequence[Mapping], grid: np.ndarray
) -> tuple[list[int], np.ndarray]:
    """Per-target detection rates: share of exclusion levels below each alpha."""
    groups = _group_by_target(rows)
    targets = sorted(groups)
    mat = np.empty((len(targets), grid.size))
    for k, t in enumerate(targets):
        levels = np.array([float(r["exclusion_alpha"]) for r in groups[t]])
        mat[k] = np.mean(levels[:, None] < grid[None, :], axis=0)
    return targets, mat


def _rank_bucket_curve(rows: Sequence[Mapping], grid: np.ndarray) -> list[tuple[float, float]]:
    levels = np.array([float(r["exclusion_alpha"]) for r in rows])
    ranks = np.array([float(r["rank"]) for r in rows])
    centers = np.asarray(grid)
    nearest = np.argmin(np.abs(levels[:, None] - centers[None, :]), axis=1)
    points = []
    for b in range(centers.size):
        mask = nearest == b
        if np.any(mask):
            points.append((float(centers[b]), float(np.log10(np.mean(ranks[mask])))))
    return points


def _aggregate_pod(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    grid = np.asarray(config["alpha_grid"], dtype=np.float64)
    targets, mat = _detection_matrix(rows, grid)
    pod = mat.mean(axis=0)
    se = mat.std(axis=0, ddof=1) / math.sqrt(len(targets)) if len(targets) > 1 else np.zeros_like(pod)
    aggregates = {
        "alpha": [float(a) for a in grid],
        "pod": [float(x) for x in pod],
        "pod_se": [float(x) for x in se],
        "pod_excess": [float(x - a) for x, a in zip(pod, grid)],
        "n_targets": len(targets),
        "n_trials": len(rows),
    }
    curves = {
        "pod_vs_alpha": _curve("alpha", "average probability of detection", list(zip(grid, pod))),
        "mean_rank_by_exclusion_alpha": _curve(
            "exclusion level", "log10(mean rank)", _rank_bucket_curve(rows, grid)
        ),
    }
    return aggregates, curves


# ---------------------------------------------------------------------------
# efficiency in resampled databases vs POD in a fixed one
# ---------------------------------------------------------------------------


def run_resampled_efficiency(
    config: ExperimentConfig, freqs: FrequencyTable | None = None
) -> ExperimentReport:
    """Conditional-method efficiency with a fresh database per trial.

    Runs the fixed-database POD phase and a phase where every (target,
    relative) trial draws a fresh database of unrelated members, then
    reports the per-alpha difference between the two detection curves.
    """
    freqs = _resolve_freqs(config, freqs)
    rel = relationship_by_name(config.relationship)
    rows = _pod_rows(config, freqs, phase="fixed")
    n = config.db_size
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        target_rmp = rmp(target, freqs)
        rel_values = sample_ki_values(
            target,
            freqs,
            config.n_relatives,
            seed=derive_rng(config.seed, _DOM_FRESH_RELATIVES, i),
            drawn_from=rel,
            scored_as=rel,
        )
        fresh = sample_ki_values(
            target,
            freqs,
            config.n_relatives * n,
            seed=derive_rng(config.seed, _DOM_FRESH_DB, i),
            drawn_from=None,
            scored_as=rel,
        ).reshape(config.n_relatives, n)
        totals = fresh.sum(axis=1) + rel_values
        above = fresh > rel_values[:, None]
        s_greater = np.where(above, fresh, 0.0).sum(axis=1)
        exclusion = s_greater / totals
        ranks = above.sum(axis=1) + 1
        for j in range(config.n_relatives):
            rows.append(
                {
                    "target": i,
                    "relative": j,
                    "target_rmp": target_rmp,
                    "relative_ki": float(rel_values[j]),
                    "exclusion_alpha": float(exclusion[j]),
                    "rank": int(ranks[j]),
                    "phase": "resampled",
                }
            )
    return _report(config, rows, RESAMPLED_REFERENCE)


def _aggregate_resampled(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    grid = np.asarray(config["alpha_grid"], dtype=np.float64)
    fixed_rows = [r for r in rows if r["phase"] == "fixed"]
    fresh_rows = [r for r in rows if r["phase"] == "resampled"]
    targets_f, mat_f = _detection_matrix(fixed_rows, grid)
    targets_r, mat_r = _detection_matrix(fresh_rows, grid)
    if targets_f != targets_r:
        raise DataValidationError("fixed and resampled phases cover different targets")
    pod = mat_f.mean(axis=0)
    eff = mat_r.mean(axis=0)
    diff = mat_r - mat_f  # paired per target
    diff_mean = diff.mean(axis=0)
    n_t = len(targets_f)
    diff_se = diff.std(axis=0, ddof=1) / math.sqrt(n_t) if n_t > 1 else np.zeros_like(diff_mean)
    aggregates = {
        "alpha": [float(a) for a in grid],
        "pod": [float(x) for x in pod],
        "efficiency": [float(x) for x in eff],
        "difference": [float(x) for x in diff_mean],
        "difference_se": [float(x) for x in diff_se],
        "mean_difference": float(np.mean(diff_mean)),
        "max_abs_difference": float(np.max(np.abs(diff_mean))),
        "n_targets": n_t,
    }
    curves = {
        "pod_vs_alpha": _curve("alpha", "average probability of detection", list(zip(grid, pod))),
        "efficiency_vs_alpha": _curve("alpha", "average resampled efficiency", list(zip(grid, eff))),
        "difference_vs_alpha": _curve("alpha", "efficiency - POD", list(zip(grid, diff_mean))),
    }
    return aggregates, curves


# ---------------------------------------------------------------------------
# rank of planted relatives
# ---------------------------------------------------------------------------


def run_rank_cdf(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    """Distribution of the rank a planted relative obtains in a fixed database."""
    freqs = _resolve_freqs(config, freqs)
    rel = relationship_by_name(config.relationship)
    db = sample_database(freqs, config.db_size, seed=derive_rng(config.seed, _DOM_DB))
    rows = []
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        target_rmp = rmp(target, freqs)
        db_ki = db.scan(target, rel)
        rel_values = sample_ki_values(
            target,
            freqs,
            config.n_relatives,
            seed=derive_rng(config.seed, _DOM_RELATIVES, i),
            drawn_from=rel,
            scored_as=rel,
        )
        _, ranks = _extension_stats(db_ki, rel_values)
        for j in range(config.n_relatives):
            rows.append(
                {
                    "target": i,
                    "relative": j,
                    "target_rmp": target_rmp,
                    "rank": int(ranks[j]),
                }
            )
    return _report(config, rows, RANK_REFERENCE)


def _rank_cdf(ranks: np.ndarray, grid: Sequence[int]) -> list[float]:
    return [float(np.mean(ranks <= n)) for n in grid]


def _aggregate_rank_cdf(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    grid = [int(n) for n in config["rank_grid"]]
    groups = _group_by_target(rows)
    targets = sorted(groups)
    per_target = np.array(
        [_rank_cdf(np.array([r["rank"] for r in groups[t]]), grid) for t in targets]
    )
    cdf = per_target.mean(axis=0)
    se = per_target.std(axis=0, ddof=1) / math.sqrt(len(targets)) if len(targets) > 1 else np.zeros_like(cdf)
    # extreme targets by their top-10 (or first grid point) hit rate
    probe = min(1, len(grid) - 1)
    easiest = targets[int(np.argmax(per_target[:, probe]))]
    hardest = targets[int(np.argmin(per_target[:, probe]))]
    aggregates = {
        "rank_grid": grid,
        "cdf": [float(x) for x in cdf],
        "cdf_se": [float(x) for x in se],
        "easiest_target": easiest,
        "hardest_target": hardest,
        "n_targets": len(targets),
        "n_trials": len(rows),
    }
    curves = {
        "rank_cdf_mean": _curve("rank n", "P(rank <= n)", list(zip(grid, cdf))),
        "rank_cdf_easiest": _curve(
            "rank n",
            "P(rank <= n)",
            list(zip(grid, per_target[targets.index(easiest)])),
        ),
        "rank_cdf_hardest": _curve(
            "rank n",
            "P(rank <= n)",
            list(zip(grid, per_target[targets.index(hardest)])),
        ),
    }
    return aggregates, curves


# ---------------------------------------------------------------------------
# target-centered subset sizes vs target rarity
# ---------------------------------------------------------------------------


def run_subset_sizes(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    """Size of the target-centered subset per alpha, paired with target RMP."""
    freqs = _resolve_freqs(config, freqs)
    rel = relationship_by_name(config.relationship)
    db = sample_database(freqs, config.db_size, seed=derive_rng(config.seed, _DOM_DB))
    grid = config.alpha_grid
    rows = []
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        target_rmp = rmp(target, freqs)
        db_sorted = np.sort(db.scan(target, rel))
        samples = np.sort(
            sample_ki_values(
                target,
                freqs,
                config.threshold_samples,
                seed=derive_rng(config.seed, _DOM_THRESHOLD, i),
                drawn_from=rel,
                scored_as=rel,
            )
        )
        n = samples.size
        for alpha in grid:
            k = max(1, math.ceil(alpha * n - 1e-9))
            threshold = float(samples[n - k])
            size = int(db_sorted.size - np.searchsorted(db_sorted, threshold, side="left"))
            rows.append(
                {
                    "target": i,
                    "alpha": float(alpha),
                    "threshold": threshold,
                    "size": size,
                    "target_rmp": target_rmp,
                }
            )
    return _report(config, rows, SUBSET_SIZE_REFERENCE)


def _aggregate_subset_sizes(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    grid = [float(a) for a in config["alpha_grid"]]
    aggregates: dict = {"alpha": grid, "mean_size": [], "sd_size": [], "rmp_spearman": []}
    curves: dict[str, dict] = {}
    mean_points = []
    for alpha in grid:
        sub = [r for r in rows if float(r["alpha"]) == alpha]
        sizes = np.array([float(r["size"]) for r in sub])
        neglog = np.array([-math.log10(float(r["target_rmp"])) for r in sub])
        aggregates["mean_size"].append(float(np.mean(sizes)))
        aggregates["sd_size"].append(_sd(sizes))
        if sizes.size > 2 and np.ptp(sizes) > 0 and np.ptp(neglog) > 0:
            rho = float(_scipy_stats.spearmanr(neglog, sizes).statistic)
        else:
            rho = math.nan
        aggregates["rmp_spearman"].append(rho)
        curves[f"size_vs_rarity_alpha_{alpha:g}"] = _curve(
            "-log10(RMP)", f"subset size at alpha={alpha:g}", list(zip(neglog, sizes)), kind="scatter"
        )
        mean_points.append((alpha, float(np.mean(sizes))))
    curves["mean_size_vs_alpha"] = _curve("alpha", "mean subset size", mean_points)
    return aggregates, curves


# ---------------------------------------------------------------------------
# half-sibling search under sibling- and half-sibling-index rankings
# ---------------------------------------------------------------------------


def run_half_sibling(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    """Rank of planted relatives when the database is sorted by SI or by HSI.

    Plants `config.relationship` relatives (half-siblings by default) and
    ranks each planted profile under both the sibling index and the
    half-sibling index ordering of the same fixed database.
    """
    freqs = _resolve_freqs(config, freqs)
    planted = relationship_by_name(config.relationship)
    db = sample_database(freqs, config.db_size, seed=derive_rng(config.seed, _DOM_DB))
    rows = []
    for i in range(config.n_targets):
        target = _sample_target(config, freqs, i)
        target_rmp = rmp(target, freqs)
        si_sorted = np.sort(db.scan(target, FULL_SIBLING))
        hsi_sorted = np.sort(db.scan(target, HALF_SIBLING))
        scores = sample_ki_values(
            target,
            freqs,
            config.n_relatives,
            seed=derive_rng(config.seed, _DOM_RELATIVES, i),
            drawn_from=planted,
            scored_as=(FULL_SIBLING, HALF_SIBLING),
        )
        rank_si = si_sorted.size - np.searchsorted(si_sorted, scores[0], side="right") + 1
        rank_hsi = hsi_sorted.size - np.searchsorted(hsi_sorted, scores[1], side="right") + 1
        for j in range(config.n_relatives):
            rows.append(
                {
                    "target": i,
                    "relative": j,
                    "target_rmp": target_rmp,
                    "rank_si": int(rank_si[j]),
                    "rank_hsi": int(rank_hsi[j]),
                }
            )
    return _report(config, rows, None)


def _aggregate_half_sibling(rows: Sequence[Mapping], config: Mapping) -> tuple[dict, dict]:
    grid = [int(n) for n in config["rank_grid"]]
    groups = _group_by_target(rows)
    targets = sorted(groups)
    per_si = np.array(
        [_rank_cdf(np.array([r["rank_si"] for r in groups[t]]), grid) for t in targets]
    )
    per_hsi = np.array(
        [_rank_cdf(np.array([r["rank_hsi"] for r in groups[t]]), grid) for t in targets]
    )
    diff = per_hsi - per_si
    n_t = len(targets)
    diff_se = diff.std(axis=0, ddof=1) / math.sqrt(n_t) if n_t > 1 else np.zeros(len(grid))
    aggregates = {
        "rank_grid": grid,
        "cdf_si": [float(x) for x in per_si.mean(axis=0)],
        "cdf_hsi": [float(x) for x in per_hsi.mean(axis=0)],
        "cdf_difference": [float(x) for x in diff.mean(axis=0)],
        "cdf_difference_se": [float(x) for x in diff_se],
        "n_targets": n_t,
        "n_trials": len(rows),
    }
    curves = {
        "rank_cdf_si": _curve("rank n", "P(rank <= n), SI ordering", list(zip(grid, per_si.mean(axis=0)))),
        "rank_cdf_hsi": _curve("rank n", "P(rank <= n), HSI ordering", list(zip(grid, per_hsi.mean(axis=0)))),
    }
    return aggregates, curves


# ---------------------------------------------------------------------------
# dispatch, defaults, merging
# ---------------------------------------------------------------------------


_RUNNERS: dict[str, Callable[[ExperimentConfig, FrequencyTable | None], ExperimentReport]] = {
    "total-lr": run_total_lr,
    "pod": run_pod,
    "resampled-efficiency": run_resampled_efficiency,
    "rank-cdf": run_rank_cdf,
    "subset-sizes": run_subset_sizes,
    "half-sibling": run_half_sibling,
}

_AGGREGATORS: dict[str, Callable[[Sequence[Mapping], Mapping], tuple[dict, dict]]] = {
    "total-lr": _aggregate_total_lr,
    "pod": _aggregate_pod,
    "resampled-efficiency": _aggregate_resampled,
    "rank-cdf": _aggregate_rank_cdf,
    "subset-sizes": _aggregate_subset_sizes,
    "half-sibling": _aggregate_half_sibling,
}

EXPERIMENTS: tuple[str, ...] = tuple(_RUNNERS)

_DEFAULT_OVERRIDES: dict[str, dict] = {
    "total-lr": {"n_targets": 100},
    "pod": {},
    "resampled-efficiency": {},
    "rank-cdf": {"n_relatives": 200},
    "subset-sizes": {"alpha_grid": (0.7, 0.8, 0.9)},
    "half-sibling": {"relationship": "half-sibling", "n_targets": 20, "n_relatives": 200},
}


def default_config(experiment: str, *, seed: int, **overrides) -> ExperimentConfig:
    if experiment not in _RUNNERS:
        raise ValueError(f"unknown experiment {experiment!r} (known: {', '.join(EXPERIMENTS)})")
    kwargs: dict = dict(_DEFAULT_OVERRIDES[experiment])
    kwargs.update(overrides)
    return ExperimentConfig(experiment=experiment, seed=seed, **kwargs)


def run_experiment(config: ExperimentConfig, freqs: FrequencyTable | None = None) -> ExperimentReport:
    try:
        runner = _RUNNERS[config.experiment]
    except KeyError:
        raise ValueError(
            f"unknown experiment {config.experiment!r} (known: {', '.join(EXPERIMENTS)})"
        ) from None
    return runner(config, freqs)


def _resolve_freqs(config: ExperimentConfig, freqs: FrequencyTable | None) -> FrequencyTable:
    if freqs is not None:
        return freqs
    if config.freqs_path is None:
        raise ValueError("no frequency table: pass one explicitly or set freqs_path")
    from .io import read_frequency_csv

    return read_frequency_csv(config.freqs_path)


def merge_reports(reports: Sequence[ExperimentReport]) -> ExperimentReport:
    """Merge same-experiment shards (differing only in seed) into one report.

    Target indices are offset per shard so per-target grouping stays valid;
    aggregates and curves are recomputed from the concatenated rows.
    """
    if not reports:
        raise ValueError("nothing to merge")
    head = reports[0]
    strip = lambda cfg: {k: v for k, v in cfg.items() if k != "seed"}
    rows: list[dict] = []
    seeds: list[int] = []
    offset = 0
    for rep in reports:
        if rep.experiment != head.experiment:
            raise DataValidationError("cannot merge reports from different experiments")
        if strip(rep.config) != strip(head.config):
            raise DataValidationError("cannot merge reports with differing configs (beyond seed)")
        for row in rep.rows:
            shifted = dict(row)
            shifted["target"] = int(row["target"]) + offset
            rows.append(shifted)
        offset += int(rep.config["n_targets"])
        seeds.extend(rep.seed if isinstance(rep.seed, list) else [rep.seed])
    config = dict(head.config)
    config["seed"] = seeds
    config["n_targets"] = offset
    aggregates, curves = _AGGREGATORS[head.experiment](rows, config)
    return ExperimentReport(
        experiment=head.experiment,
        config=config,
        seed=seeds,
        config_hash=config_hash(config),
        rows=rows,
        aggregates=aggregates,
        curves=curves,
        references=head.references,
    )

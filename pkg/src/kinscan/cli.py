"""Command-line surface.

Subcommands
-----------
* ``freqs validate``  - check (and optionally normalize) a frequency table
* ``db sample``       - sample a synthetic profile database to CSV/JSONL
* ``search``          - scan a database for relatives of a target profile
* ``preassess``       - case pre-assessment from the target profile alone
* ``simulate <name>`` - run a simulation experiment
* ``report merge``    - merge same-experiment report shards

Exit codes: 0 success, 2 usage, 3 data validation, 4 numeric degeneracy.

A plain-text config file (``key = value`` lines) can supply defaults for
``search``, ``preassess`` and ``simulate``; explicit CLI flags win, built-in
defaults apply last.  Every run records its seed; without ``--seed`` a fresh
one is drawn and printed so the run stays reproducible after the fact.
"""

from __future__ import annotations

import argparse
import math
import secrets
import sys
from pathlib import Path

import numpy as np

from . import io as kio
from .database import sample_database
from .errors import (
    DataValidationError,
    DegenerateEvidenceError,
    EnumerationCapError,
    KinscanError,
)
from .genetics import (
    RELATIONSHIPS,
    FrequencyTable,
    Profile,
    derive_rng,
    relationship_by_name,
    rmp,
    sample_ki_values,
    enumerate_lr_distribution,
)
from .inference import LrVector, PriorVector, compute_lr_vector, posterior
from .plots import render_curve, render_report_figures
from .simulation import EXPERIMENTS, config_hash, default_config, merge_reports, run_experiment
from .strategies import (
    SubsetSelection,
    conditional_subset,
    estimate_s_beta,
    estimate_t_alpha,
    heterogeneous_conditional,
    heterogeneous_target_centered,
    ibs_lr_subset,
    target_centered_subset,
)

DEFAULT_FREQS = Path(__file__).parent / "data" / "synthetic_freqs_10locus.csv"

_PREASSESS_GRID = (0.5, 0.7, 0.8, 0.9, 0.95, 0.99)


class UsageError(KinscanError):
    """Bad flag combination or parameter value."""


# ---------------------------------------------------------------------------
# config file + seeds
# ---------------------------------------------------------------------------

_CONFIG_COERCERS = {
    "freqs": str,
    "db": str,
    "target": str,
    "rel": str,
    "method": str,
    "alpha": float,
    "beta": float,
    "ibs": int,
    "lr_min": float,
    "samples": int,
    "seed": int,
    "pi_d": float,
    "db_size": int,
    "targets": int,
    "relatives": int,
    "alpha_grid": str,
    "out": str,
    "priors": str,
}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise DataValidationError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    file_values = _load_config_file(args.config)
    for key, raw in file_values.items():
        if key not in _CONFIG_COERCERS:
            raise UsageError(f"config file: unknown option {key!r}")
        if getattr(args, key, None) is None:
            coerce = _CONFIG_COERCERS[key]
            try:
                setattr(args, key, coerce(raw))
            except ValueError:
                raise UsageError(f"config file: bad value for {key}: {raw!r}") from None


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    seed = secrets.randbits(63)
    print(f"seed = {seed} (auto-generated; pass --seed {seed} to reproduce)")
    return seed


def _parse_grid(raw: str | None, default: tuple[float, ...]) -> tuple[float, ...]:
    if raw is None:
        return default
    try:
        grid = tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad alpha grid {raw!r}") from None
    if not grid or any(not (0.0 <= a <= 1.0) for a in grid):
        raise UsageError("alpha grid values must lie in [0, 1]")
    return grid


def _load_freqs(args: argparse.Namespace) -> FrequencyTable:
    path = getattr(args, "freqs", None) or str(DEFAULT_FREQS)
    return kio.read_frequency_csv(path, normalize=bool(getattr(args, "normalize", False)))


def _load_target(path: str) -> Profile:
    profiles = kio.read_profiles(path)
    if len(profiles) != 1:
        raise DataValidationError(f"{path}: expected exactly one target profile, found {len(profiles)}")
    return profiles[0]


def _restrict_to(target: Profile, loci: tuple[str, ...]) -> Profile:
    shared = {locus: g for locus, g in target.genotypes.items() if locus in loci}
    return Profile(target.id, target.panel, shared)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_freqs_validate(args: argparse.Namespace) -> int:
    freqs = _load_freqs(args)
    for name in freqs.loci:
        lf = freqs.locus(name)
        print(f"{name}: {len(lf)} alleles, sum={lf.sum():.9f}, min={float(lf.freqs.min()):.6f}")
    print(f"OK: {len(freqs.loci)} loci validated")
    if args.out:
        kio.write_frequency_csv(freqs, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_db_sample(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    freqs = _load_freqs(args)
    seed = _resolve_seed(args)
    loci = tuple(x for x in args.loci.split(",") if x) if args.loci else None
    db = sample_database(
        freqs, args.n, seed=seed, loci=loci, id_prefix=args.id_prefix, panel=args.panel
    )
    kio.write_profiles(db.to_profiles(), args.out, fmt=args.format)
    print(f"wrote {args.n} profiles to {args.out} (seed={seed})")
    return 0


def _split_parts(lr: LrVector, priors: PriorVector, panels: list[str]):
    """Per-panel (LrVector, PriorVector) views of a scanned database."""
    priors = priors.aligned_to(lr.ids)
    order: dict[str, list[int]] = {}
    for k, panel in enumerate(panels):
        order.setdefault(panel, []).append(k)
    lr_parts = {}
    prior_parts = {}
    for panel, idx in order.items():
        sel = np.array(idx, dtype=np.int64)
        lr_parts[panel] = LrVector(tuple(lr.ids[k] for k in idx), lr.values[sel])
        prior_parts[panel] = PriorVector(tuple(lr.ids[k] for k in idx), priors.values[sel])
    return lr_parts, prior_parts


def _part_alphas(args, part_names, default_level) -> dict[str, float]:
    overrides = {}
    for item in args.alpha_part or []:
        panel, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--alpha-part expects PANEL=ALPHA, got {item!r}")
        if panel not in part_names:
            raise UsageError(f"--alpha-part: unknown panel {panel!r} (have: {', '.join(part_names)})")
        try:
            overrides[panel] = float(raw)
        except ValueError:
            raise UsageError(f"--alpha-part: bad alpha {raw!r}") from None
    levels = {name: overrides.get(name, default_level) for name in part_names}
    for name, level in levels.items():
        if level is None:
            raise UsageError(f"no alpha given for panel {name!r} (use --alpha or --alpha-part)")
        if not (0.0 <= level <= 1.0):
            raise UsageError(f"alpha for panel {name!r} must lie in [0, 1], got {level}")
    return levels


def _method_selection(args, target, db, rel, freqs, lr, priors, seed) -> SubsetSelection:
    panels = db.member_panels()
    lr_parts, prior_parts = _split_parts(lr, priors, panels)
    part_names = tuple(lr_parts.keys())
    multi = len(part_names) > 1 or bool(args.alpha_part)

    if args.method == "conditional":
        levels = _part_alphas(args, part_names, args.alpha)
        if multi:
            return heterogeneous_conditional(lr_parts, prior_parts, levels)
        (name,) = part_names
        return conditional_subset(lr_parts[name], prior_parts[name], levels[name])

    if args.method == "target-centered":
        if args.lr_min is not None and not multi:
            return target_centered_subset(lr, args.lr_min)
        levels = _part_alphas(args, part_names, args.alpha)
        thresholds = {}
        for k, name in enumerate(part_names):
            part_loci = next(p.loci for p in db.parts if p.name == name)
            part_target = _restrict_to(target, tuple(l for l in part_loci if l in target.genotypes))
            est = estimate_t_alpha(
                part_target,
                rel,
                freqs,
                levels[name],
                seed=derive_rng(seed, 100, k),
                n_samples=args.samples,
                exact=args.exact,
            )
            thresholds[name] = est.threshold
        if multi:
            return heterogeneous_target_centered(lr_parts, thresholds)
        (name,) = part_names
        return target_centered_subset(lr, thresholds[name])

    if args.method == "s-beta":
        if args.beta is None:
            raise UsageError("--beta is required for method s-beta")
        thresholds = {}
        for k, name in enumerate(part_names):
            part_loci = next(p.loci for p in db.parts if p.name == name)
            part_target = _restrict_to(target, tuple(l for l in part_loci if l in target.genotypes))
            est = estimate_s_beta(
                part_target,
                rel,
                freqs,
                args.beta,
                seed=derive_rng(seed, 101, k),
                n_samples=args.samples,
                exact=args.exact,
            )
            thresholds[name] = est.threshold
        if multi:
            sel = heterogeneous_target_centered(lr_parts, thresholds)
            return SubsetSelection("s-beta", sel.selected, sel.threshold, sel.params)
        (name,) = part_names
        sel = target_centered_subset(lr, thresholds[name])
        return SubsetSelection("s-beta", sel.selected, sel.threshold, {"beta": args.beta})

    if args.method == "ibs-lr":
        return ibs_lr_subset(
            target, db, rel, freqs, args.ibs if args.ibs is not None else 0,
            args.lr_min if args.lr_min is not None else 0.0,
        )

    raise UsageError(f"unknown method {args.method!r}")


def cmd_search(args: argparse.Namespace) -> int:
    _apply_config_file(args)
    if args.method in ("conditional",) and args.alpha is None and not args.alpha_part:
        raise UsageError("--alpha (or --alpha-part) is required for the conditional method")
    if args.alpha is not None and not (0.0 <= args.alpha <= 1.0):
        raise UsageError(f"--alpha must lie in [0, 1], got {args.alpha}")
    if args.beta is not None and not (0.0 < args.beta <= 1.0):
        raise UsageError(f"--beta must lie in (0, 1], got {args.beta}")
    if args.lr_min is not None and args.lr_min < 0:
        raise UsageError("--lr-min must be >= 0")
    if args.ibs is not None and args.ibs < 0:
        raise UsageError("--ibs must be >= 0")

    freqs = _load_freqs(args)
    db = kio.ingest_database(args.db, freqs)
    target = _load_target(args.target)
    rel = relationship_by_name(args.rel)
    seed = _resolve_seed(args)

    lr = compute_lr_vector(target, db, rel, workers=args.workers)
    listed = kio.read_priors_csv(args.priors) if args.priors else None
    priors = kio.build_priors(lr.ids, listed, args.pi_d if args.pi_d is not None else 0.5)
    post = posterior(lr, priors)
    selection = _method_selection(args, target, db, rel, freqs, lr, priors, seed)

    total = float(math.fsum(lr.values.tolist()))
    ratio = total / len(lr)
    print(
        f"total kinship index {total:.6g} over {len(lr)} members (ratio {ratio:.3f}; "
        "totals of the same magnitude as the database size indicate no relative present)"
    )
    print(f"selected {len(selection.selected)} of {len(lr)} members by the {selection.method} method")

    effective = {
        "command": "search",
        "db": args.db,
        "target": args.target,
        "rel": args.rel,
        "method": args.method,
        "alpha": args.alpha,
        "beta": args.beta,
        "ibs": args.ibs,
        "lr_min": args.lr_min,
        "samples": args.samples,
        "exact": bool(args.exact),
        "pi_d": args.pi_d if args.pi_d is not None else 0.5,
        "seed": seed,
    }
    digest = config_hash(effective)
    meta = {"config_hash": digest, "seed": seed}
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    kio.write_posterior_report(outdir / "posterior_report.csv", lr, priors, post, meta)
    kio.write_selection_report(
        outdir / "selection_report.csv", selection, lr, priors,
        dict(zip(lr.ids, db.member_panels())), meta,
    )
    kio.write_json(
        outdir / "search_summary.json",
        {
            "config": effective,
            "config_hash": digest,
            "seed": seed,
            "n_members": len(lr),
            "ki_total": total,
            "ki_total_ratio": ratio,
            "n_selected": len(selection.selected),
            "method": selection.method,
            "threshold": None if math.isnan(selection.threshold) else selection.threshold,
            "params": selection.params,
            "guaranteed_efficiency": selection.guaranteed_efficiency,
            "posterior_not_in_db": post.outside,
        },
    )
    print(f"wrote {outdir}/posterior_report.csv, selection_report.csv, search_summary.json")
    return 0


def cmd_preassess(args: argparse.Namespace) -> int:
    _apply_config_file(args)
    if args.db_size is None or args.db_size < 1:
        raise UsageError("--db-size must be >= 1")
    freqs = _load_freqs(args)
    target = _load_target(args.target)
    rel = relationship_by_name(args.rel)
    seed = _resolve_seed(args)
    grid = _parse_grid(args.alpha_grid, _PREASSESS_GRID)
    n = args.db_size

    if args.exact:
        dist_rel = enumerate_lr_distribution(target, rel, freqs, model="relative")
        dist_pop = enumerate_lr_distribution(target, rel, freqs, model="population")
        rel_values = None
        pop_sorted = None
    else:
        rel_values = np.sort(
            sample_ki_values(target, freqs, args.samples, seed=derive_rng(seed, 0),
                             drawn_from=rel, scored_as=rel)
        )
        pop_sorted = np.sort(
            sample_ki_values(target, freqs, args.samples, seed=derive_rng(seed, 1),
                             drawn_from=None, scored_as=rel)
        )

    rows = []
    for alpha in grid:
        if args.exact:
            t = dist_rel.threshold_at(alpha)
            tail = dist_pop.tail_prob(t)
            se = 0.0
        else:
            k = max(1, math.ceil(alpha * rel_values.size - 1e-9))
            t = float(rel_values[rel_values.size - k])
            hits = pop_sorted.size - int(np.searchsorted(pop_sorted, t, side="left"))
            tail = hits / pop_sorted.size
            se = (n - 1) * math.sqrt(tail * (1.0 - tail) / pop_sorted.size)
        rows.append(
            {
                "alpha": float(alpha),
                "threshold": float(t),
                "chance_tail_prob": float(tail),
                "expected_size": 1.0 + (n - 1) * tail,
                "expected_size_se": float(se),
            }
        )

    if args.exact:
        # weighted quantiles of the expected rank over the exact relative law
        expected = 1.0 + n * np.array(
            [float(np.sum(dist_pop.probs[dist_pop.values > v])) for v in dist_rel.values]
        )
        order = np.argsort(expected)
        cum = np.cumsum(dist_rel.probs[order])
        quantiles = {
            f"p{int(q * 100)}": float(expected[order][int(np.searchsorted(cum, q))])
            for q in (0.1, 0.5, 0.9)
        }
    else:
        greater = pop_sorted.size - np.searchsorted(pop_sorted, rel_values, side="right")
        expected = 1.0 + n * greater / pop_sorted.size
        quantiles = {
            f"p{int(q * 100)}": float(np.quantile(expected, q)) for q in (0.1, 0.5, 0.9)
        }

    effective = {
        "command": "preassess",
        "target": args.target,
        "rel": args.rel,
        "db_size": n,
        "alpha_grid": list(grid),
        "samples": args.samples,
        "exact": bool(args.exact),
        "seed": seed,
    }
    digest = config_hash(effective)
    meta = {"config_hash": digest, "seed": seed}
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    kio.write_rows_csv(outdir / "preassess.csv", rows, meta)
    kio.write_json(
        outdir / "preassess_summary.json",
        {
            "config": effective,
            "config_hash": digest,
            "seed": seed,
            "target_rmp": rmp(target, freqs),
            "expected_rank_quantiles": quantiles,
            "rows_file": "preassess.csv",
        },
    )
    curve = {
        "x_label": "alpha",
        "y_label": "expected subset size",
        "kind": "line",
        "points": [[r["alpha"], r["expected_size"]] for r in rows],
    }
    kio.write_curve_csv(outdir / "preassess_curve_expected_size.csv", curve, meta)
    if not args.no_plots:
        render_curve(curve, outdir / "preassess_expected_size.png", title="expected subset size")
    for row in rows:
        print(
            f"alpha={row['alpha']:g}: threshold={row['threshold']:.6g}, "
            f"expected size={row['expected_size']:.1f}"
        )
    print(f"expected rank quantiles: {quantiles}")
    print(f"wrote {outdir}/preassess.csv, preassess_summary.json")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    _apply_config_file(args)
    if args.experiment not in EXPERIMENTS:
        raise UsageError(
            f"unknown experiment {args.experiment!r} (known: {', '.join(EXPERIMENTS)})"
        )
    seed = _resolve_seed(args)
    overrides: dict = {}
    if args.db_size is not None:
        overrides["db_size"] = args.db_size
    if args.targets is not None:
        overrides["n_targets"] = args.targets
    if args.relatives is not None:
        overrides["n_relatives"] = args.relatives
    if args.rel is not None:
        overrides["relationship"] = args.rel
    if args.samples is not None:
        overrides["threshold_samples"] = args.samples
    if args.alpha_grid is not None:
        overrides["alpha_grid"] = _parse_grid(args.alpha_grid, ())
    freqs_path = getattr(args, "freqs", None) or str(DEFAULT_FREQS)
    try:
        config = default_config(args.experiment, seed=seed, freqs_path=freqs_path, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    freqs = _load_freqs(args)
    report = run_experiment(config, freqs)
    paths = kio.write_experiment_report(report, args.out)
    if not args.no_plots:
        render_report_figures(report, args.out)
    print(f"{args.experiment}: {len(report.rows)} rows (seed={seed}, config_hash={report.config_hash})")
    print(f"wrote {paths['rows']} and {paths['summary']}")
    return 0


def cmd_report_merge(args: argparse.Namespace) -> int:
    reports = [kio.read_experiment_report(p) for p in args.summaries]
    merged = merge_reports(reports)
    stem = f"merged_{merged.experiment}"
    paths = kio.write_experiment_report(merged, args.out, stem=stem)
    if not args.no_plots:
        render_report_figures(merged, args.out, stem=stem)
    print(f"merged {len(reports)} reports ({len(merged.rows)} rows) into {paths['summary']}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinscan",
        description="Familial DNA database searching: scans, posteriors, and candidate selection.",
    )
    sub = parser.add_subparsers(dest="command")

    freqs_p = sub.add_parser("freqs", help="frequency table utilities")
    freqs_sub = freqs_p.add_subparsers(dest="freqs_command")
    validate = freqs_sub.add_parser("validate", help="validate (and optionally normalize) a table")
    validate.add_argument("freqs", help="frequency CSV path")
    validate.add_argument("--normalize", action="store_true", help="rescale per-locus sums to 1")
    validate.add_argument("--out", help="write the validated table here")
    validate.set_defaults(func=cmd_freqs_validate)

    db_p = sub.add_parser("db", help="profile database utilities")
    db_sub = db_p.add_subparsers(dest="db_command")
    db_sample = db_sub.add_parser("sample", help="sample a synthetic database")
    db_sample.add_argument("--freqs", help="frequency CSV (default: bundled synthetic panel)")
    db_sample.add_argument("--normalize", action="store_true")
    db_sample.add_argument("--n", type=int, required=True, help="number of profiles")
    db_sample.add_argument("--seed", type=int)
    db_sample.add_argument("--loci", help="comma-separated locus subset (default: all)")
    db_sample.add_argument("--id-prefix", default="m")
    db_sample.add_argument("--panel", default="", help="panel label for the sampled profiles")
    db_sample.add_argument("--format", choices=("csv", "jsonl"), default=None)
    db_sample.add_argument("--out", required=True)
    db_sample.set_defaults(func=cmd_db_sample)

    search = sub.add_parser("search", help="scan a database for relatives of a target")
    search.add_argument("--config", help="key=value defaults file")
    search.add_argument("--freqs")
    search.add_argument("--normalize", action="store_true")
    search.add_argument("--db", required=True, help="database CSV/JSONL")
    search.add_argument("--target", required=True, help="single-profile CSV/JSONL")
    search.add_argument("--rel", default="sibling", choices=sorted(RELATIONSHIPS))
    search.add_argument(
        "--method",
        default="conditional",
        choices=("conditional", "target-centered", "s-beta", "ibs-lr"),
    )
    search.add_argument("--alpha", type=float, help="selection level for conditional/target-centered")
    search.add_argument("--alpha-part", action="append", metavar="PANEL=ALPHA",
                        help="per-panel alpha for heterogeneous databases (repeatable)")
    search.add_argument("--beta", type=float, help="chance-quantile level for method s-beta")
    search.add_argument("--ibs", type=int, help="minimum shared-allele count for method ibs-lr")
    search.add_argument("--lr-min", type=float, help="explicit KI threshold (target-centered/ibs-lr)")
    search.add_argument("--samples", type=int, default=50_000, help="Monte Carlo threshold sample size")
    search.add_argument("--exact", action="store_true", help="exact thresholds via enumeration")
    search.add_argument("--priors", help="priors CSV (id,prior)")
    search.add_argument("--pi-d", type=float, help="total prior mass on the database (default 0.5)")
    search.add_argument("--workers", type=int, default=1)
    search.add_argument("--seed", type=int)
    search.add_argument("--out", required=True, help="output directory")
    search.set_defaults(func=cmd_search)

    pre = sub.add_parser("preassess", help="feasibility numbers from the target profile alone")
    pre.add_argument("--config")
    pre.add_argument("--freqs")
    pre.add_argument("--normalize", action="store_true")
    pre.add_argument("--target", required=True)
    pre.add_argument("--rel", default="sibling", choices=sorted(RELATIONSHIPS))
    pre.add_argument("--db-size", type=int, required=True, help="database size N the search would face")
    pre.add_argument("--alpha-grid", help="comma-separated alphas (default 0.5,...,0.99)")
    pre.add_argument("--samples", type=int, default=50_000)
    pre.add_argument("--exact", action="store_true")
    pre.add_argument("--seed", type=int)
    pre.add_argument("--no-plots", action="store_true")
    pre.add_argument("--out", required=True)
    pre.set_defaults(func=cmd_preassess)

    sim = sub.add_parser("simulate", help="run a simulation experiment")
    sim.add_argument("experiment", help=f"one of: {', '.join(EXPERIMENTS)}")
    sim.add_argument("--config")
    sim.add_argument("--freqs")
    sim.add_argument("--normalize", action="store_true")
    sim.add_argument("--db-size", type=int)
    sim.add_argument("--targets", type=int)
    sim.add_argument("--relatives", type=int)
    sim.add_argument("--rel", choices=sorted(RELATIONSHIPS))
    sim.add_argument("--samples", type=int, help="threshold sample size (subset-sizes)")
    sim.add_argument("--alpha-grid")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--no-plots", action="store_true")
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_simulate)

    rep = sub.add_parser("report", help="report utilities")
    rep_sub = rep.add_subparsers(dest="report_command")
    merge = rep_sub.add_parser("merge", help="merge same-experiment report shards")
    merge.add_argument("summaries", nargs="+", help="summary JSON paths")
    merge.add_argument("--no-plots", action="store_true")
    merge.add_argument("--out", required=True)
    merge.set_defaults(func=cmd_report_merge)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit(2) for usage errors
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args) or 0
    except (UsageError, EnumerationCapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateEvidenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except DataValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

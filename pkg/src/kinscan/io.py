"""File ingestion, validation, and report emission.

Formats
-------
* frequency tables: CSV with header ``locus,allele,frequency``; ``#`` lines
  are comments.
* profiles: CSV rows ``id,panel,locus:a/b,locus:a/b,...`` (no header
  required; a leading ``id,panel,...`` row is tolerated), or JSON-lines
  objects ``{"id": ..., "panel": ..., "genotypes": {locus: "a/b"}}``.
  Genotypes are written in canonical sorted order and accepted in either
  order on read.
* priors: CSV with header ``id,prior``; ids omitted from the file share the
  remainder of the ``pi_d`` total equally.
* experiment reports: per-row CSV + summary JSON + one (x, y) CSV per curve.

Every emitted file embeds the config hash and seed as ``#`` comment lines,
and all writes go through a temp-file-plus-rename so partial outputs are
never left behind.
"""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .database import ProfileDatabase
from .errors import DataValidationError
from .genetics import FrequencyTable, Profile, canonical_genotype
from .inference import LrVector, PosteriorResult, PriorVector
from .simulation import ExperimentReport
from .strategies import SubsetSelection

__all__ = [
    "read_frequency_csv",
    "write_frequency_csv",
    "read_profiles",
    "write_profiles",
    "ingest_database",
    "read_priors_csv",
    "build_priors",
    "write_rows_csv",
    "write_json",
    "write_experiment_report",
    "read_experiment_report",
    "write_posterior_report",
    "write_selection_report",
]


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _meta_lines(meta: Mapping[str, object] | None) -> str:
    if not meta:
        return ""
    return "".join(f"# {key}={value}\n" for key, value in meta.items())


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# frequency tables
# ---------------------------------------------------------------------------


def read_frequency_csv(path: str | Path, *, normalize: bool = False) -> FrequencyTable:
    """Load and validate an allele frequency table."""
    path = Path(path)
    mapping: dict[str, dict[str, float]] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or (row[0].startswith("#")):
                continue
            row = [cell.strip() for cell in row]
            if header is None:
                header = [cell.lower() for cell in row]
                if header != ["locus", "allele", "frequency"]:
                    raise DataValidationError(
                        f"{path}:{lineno}: expected header 'locus,allele,frequency', got {','.join(row)!r}"
                    )
                continue
            if len(row) != 3:
                raise DataValidationError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            locus, allele, raw = row
            if not locus or not allele:
                raise DataValidationError(f"{path}:{lineno}: empty locus or allele label")
            try:
                freq = float(raw)
            except ValueError:
                raise DataValidationError(f"{path}:{lineno}: bad frequency {raw!r}") from None
            if not math.isfinite(freq) or freq <= 0.0:
                raise DataValidationError(
                    f"{path}:{lineno}: locus {locus!r}: frequency must be finite and > 0, got {raw}"
                )
            per_locus = mapping.setdefault(locus, {})
            if allele in per_locus:
                raise DataValidationError(
                    f"{path}:{lineno}: duplicate allele {allele!r} at locus {locus!r}"
                )
            per_locus[allele] = freq
    if header is None:
        raise DataValidationError(f"{path}: empty frequency file")
    return FrequencyTable.from_mapping(mapping, normalize=normalize, source=str(path))


def write_frequency_csv(freqs: FrequencyTable, path: str | Path) -> None:
    lines = ["locus,allele,frequency\n"]
    for locus, alleles in freqs.to_mapping().items():
        for allele, freq in alleles.items():
            lines.append(f"{locus},{allele},{repr(freq)}\n")
    _atomic_write(Path(path), "".join(lines))


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


def _parse_genotype_token(token: str, path: Path, lineno: int) -> tuple[str, tuple[str, str]]:
    locus, sep, pair = token.partition(":")
    if not sep or not locus:
        raise DataValidationError(
            f"{path}:{lineno}: expected 'locus:a/b' genotype field, got {token!r}"
        )
    alleles = pair.split("/")
    if len(alleles) != 2 or not alleles[0] or not alleles[1]:
        raise DataValidationError(
            f"{path}:{lineno}: locus {locus!r}: expected genotype 'a/b', got {pair!r}"
        )
    return locus.strip(), canonical_genotype(alleles[0].strip(), alleles[1].strip())


def _profiles_from_csv(path: Path) -> list[Profile]:
    profiles = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#"):
                continue
            row = [cell.strip() for cell in row]
            if lineno == 1 and row[0].lower() == "id":
                continue
            if len(row) < 3:
                raise DataValidationError(
                    f"{path}:{lineno}: expected 'id,panel,locus:a/b,...', got {len(row)} fields"
                )
            profile_id, panel = row[0], row[1]
            if not profile_id:
                raise DataValidationError(f"{path}:{lineno}: empty profile id")
            genotypes: dict[str, tuple[str, str]] = {}
            for token in row[2:]:
                if not token:
                    continue
                locus, geno = _parse_genotype_token(token, path, lineno)
                if locus in genotypes:
                    raise DataValidationError(
                        f"{path}:{lineno}: duplicate locus {locus!r} for profile {profile_id!r}"
                    )
                genotypes[locus] = geno
            if not genotypes:
                raise DataValidationError(f"{path}:{lineno}: profile {profile_id!r} has no genotypes")
            profiles.append(Profile(profile_id, panel, genotypes))
    return profiles


def _profiles_from_jsonl(path: Path) -> list[Profile]:
    profiles = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataValidationError(f"{path}:{lineno}: bad JSON: {exc}") from None
            try:
                profile_id = str(obj["id"])
                genotypes_raw = obj["genotypes"]
            except (KeyError, TypeError):
                raise DataValidationError(
                    f"{path}:{lineno}: expected object with 'id' and 'genotypes'"
                ) from None
            panel = str(obj.get("panel", ""))
            genotypes = {}
            for locus, pair in genotypes_raw.items():
                alleles = str(pair).split("/")
                if len(alleles) != 2:
                    raise DataValidationError(
                        f"{path}:{lineno}: locus {locus!r}: expected 'a/b', got {pair!r}"
                    )
                genotypes[str(locus)] = canonical_genotype(alleles[0], alleles[1])
            if not genotypes:
                raise DataValidationError(f"{path}:{lineno}: profile {profile_id!r} has no genotypes")
            profiles.append(Profile(profile_id, panel, genotypes))
    return profiles


def read_profiles(path: str | Path) -> list[Profile]:
    """Read profiles from CSV or JSON-lines (chosen by extension, else sniffed)."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".json", ".ndjson"):
        profiles = _profiles_from_jsonl(path)
    elif suffix == ".csv":
        profiles = _profiles_from_csv(path)
    else:
        head = path.read_text()[:1].strip()
        profiles = _profiles_from_jsonl(path) if head == "{" else _profiles_from_csv(path)
    if not profiles:
        raise DataValidationError(f"{path}: no profiles found")
    return profiles


def write_profiles(profiles: Sequence[Profile], path: str | Path, *, fmt: str | None = None) -> None:
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".json", ".ndjson") else "csv"
    lines = []
    if fmt == "csv":
        for prof in profiles:
            cells = [prof.id, prof.panel]
            cells += [f"{locus}:{a}/{b}" for locus, (a, b) in sorted(prof.genotypes.items())]
            lines.append(",".join(cells) + "\n")
    elif fmt == "jsonl":
        for prof in profiles:
            obj = {
                "id": prof.id,
                "panel": prof.panel,
                "genotypes": {locus: f"{a}/{b}" for locus, (a, b) in sorted(prof.genotypes.items())},
            }
            lines.append(json.dumps(obj, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown profile format {fmt!r}")
    _atomic_write(path, "".join(lines))


def ingest_database(path: str | Path, freqs: FrequencyTable) -> ProfileDatabase:
    """Read, validate and encode a profile database against a frequency table."""
    return ProfileDatabase.from_profiles(read_profiles(path), freqs)


# ---------------------------------------------------------------------------
# priors
# ---------------------------------------------------------------------------


def read_priors_csv(path: str | Path) -> dict[str, float]:
    path = Path(path)
    out: dict[str, float] = {}
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = None
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#"):
                continue
            row = [cell.strip() for cell in row]
            if header is None:
                header = [cell.lower() for cell in row]
                if header[:2] != ["id", "prior"]:
                    raise DataValidationError(
                        f"{path}:{lineno}: expected header 'id,prior', got {','.join(row)!r}"
                    )
                continue
            if len(row) < 2:
                raise DataValidationError(f"{path}:{lineno}: expected 'id,prior'")
            member, raw = row[0], row[1]
            if member in out:
                raise DataValidationError(f"{path}:{lineno}: duplicate id {member!r}")
            try:
                value = float(raw)
            except ValueError:
                raise DataValidationError(f"{path}:{lineno}: bad prior {raw!r}") from None
            if not math.isfinite(value) or value < 0.0:
                raise DataValidationError(f"{path}:{lineno}: prior must be finite and >= 0")
            out[member] = value
    if header is None:
        raise DataValidationError(f"{path}: empty priors file")
    return out


def build_priors(
    ids: Sequence[str],
    listed: Mapping[str, float] | None,
    pi_d: float,
) -> PriorVector:
    """Priors over `ids` with total mass `pi_d`.

    Ids present in `listed` keep their stated priors; the remaining mass is
    split equally over the omitted ids.
    """
    if not (0.0 <= pi_d <= 1.0):
        raise DataValidationError(f"pi_d must lie in [0, 1], got {pi_d}")
    listed = dict(listed or {})
    unknown = set(listed) - set(ids)
    if unknown:
        raise DataValidationError(f"priors listed for unknown ids: {sorted(unknown)[:5]}")
    stated = math.fsum(listed.values())
    if stated > pi_d + 1e-9:
        raise DataValidationError(
            f"listed priors sum to {stated}, exceeding the database total pi_d={pi_d}"
        )
    omitted = [m for m in ids if m not in listed]
    if omitted:
        share = (pi_d - stated) / len(omitted)
        values = [listed.get(m, share) for m in ids]
    else:
        if abs(stated - pi_d) > 1e-9:
            raise DataValidationError(
                f"all ids listed but priors sum to {stated}, not pi_d={pi_d}"
            )
        values = [listed[m] for m in ids]
    return PriorVector(tuple(ids), np.array(values, dtype=np.float64))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def write_rows_csv(
    path: str | Path,
    rows: Sequence[Mapping[str, object]],
    meta: Mapping[str, object] | None = None,
) -> None:
    if not rows:
        raise ValueError("no rows to write")
    fields = list(rows[0].keys())
    lines = [_meta_lines(meta), ",".join(fields) + "\n"]
    for row in rows:
        lines.append(",".join(_fmt(row[f]) for f in fields) + "\n")
    _atomic_write(Path(path), "".join(lines))


def _coerce(cell: str) -> object:
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_rows_csv(path: str | Path) -> list[dict]:
    path = Path(path)
    rows: list[dict] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        fields = None
        for row in reader:
            if not row or row[0].startswith("#"):
                continue
            if fields is None:
                fields = row
                continue
            rows.append({f: _coerce(c) for f, c in zip(fields, row)})
    if fields is None:
        raise DataValidationError(f"{path}: empty rows file")
    return rows


def write_json(path: str | Path, obj: object) -> None:
    _atomic_write(Path(path), json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_curve_csv(path: str | Path, curve: Mapping, meta: Mapping[str, object] | None = None) -> None:
    lines = [_meta_lines(meta)]
    lines.append(f"# x_label={curve['x_label']}\n# y_label={curve['y_label']}\n")
    lines.append("x,y\n")
    for x, y in curve["points"]:
        lines.append(f"{_fmt(float(x))},{_fmt(float(y))}\n")
    _atomic_write(Path(path), "".join(lines))


def write_experiment_report(
    report: ExperimentReport,
    outdir: str | Path,
    stem: str | None = None,
) -> dict[str, Path]:
    """Emit rows CSV, summary JSON, and one plot-data CSV per curve."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = stem or report.experiment
    meta = {"config_hash": report.config_hash, "seed": report.seed, "experiment": report.experiment}
    paths: dict[str, Path] = {}

    rows_path = outdir / f"{stem}_rows.csv"
    write_rows_csv(rows_path, report.rows, meta)
    paths["rows"] = rows_path

    summary = report.to_dict()
    summary["rows_file"] = rows_path.name
    json_path = outdir / f"{stem}_summary.json"
    write_json(json_path, summary)
    paths["summary"] = json_path

    for name, curve in report.curves.items():
        curve_path = outdir / f"{stem}_curve_{name}.csv"
        write_curve_csv(curve_path, curve, meta)
        paths[f"curve:{name}"] = curve_path
    return paths


def read_experiment_report(json_path: str | Path) -> ExperimentReport:
    """Rehydrate a report from its summary JSON (rows CSV must sit alongside)."""
    json_path = Path(json_path)
    try:
        summary = json.loads(json_path.read_text())
    except json.JSONDecodeError as exc:
        raise DataValidationError(f"{json_path}: bad JSON: {exc}") from None
    for key in ("experiment", "config", "seed", "config_hash", "aggregates", "curves", "rows_file"):
        if key not in summary:
            raise DataValidationError(f"{json_path}: missing report field {key!r}")
    rows = read_rows_csv(json_path.parent / summary["rows_file"])
    return ExperimentReport(
        experiment=summary["experiment"],
        config=summary["config"],
        seed=summary["seed"],
        config_hash=summary["config_hash"],
        rows=rows,
        aggregates=summary["aggregates"],
        curves=summary["curves"],
        references=summary.get("references"),
    )


def write_posterior_report(
    path: str | Path,
    lr: LrVector,
    priors: PriorVector,
    post: PosteriorResult,
    meta: Mapping[str, object] | None = None,
) -> None:
    """Posterior report: id,lr,prior,posterior sorted by descending weight, ties by id."""
    priors = priors.aligned_to(lr.ids)
    weights = lr.values * priors.values
    order = sorted(range(len(lr.ids)), key=lambda k: (-weights[k], lr.ids[k]))
    lines = [_meta_lines(meta), "id,lr,prior,posterior\n"]
    for k in order:
        lines.append(
            f"{lr.ids[k]},{_fmt(float(lr.values[k]))},{_fmt(float(priors.values[k]))},"
            f"{_fmt(float(post.probabilities[k]))}\n"
        )
    lines.append(f"# P(not in database)={_fmt(post.outside)}\n")
    _atomic_write(Path(path), "".join(lines))


def write_selection_report(
    path: str | Path,
    selection: SubsetSelection,
    lr: LrVector,
    priors: PriorVector,
    panels: Mapping[str, str],
    meta: Mapping[str, object] | None = None,
) -> None:
    """Selection report: id,panel,lr,weight,selected,threshold,method (database order)."""
    priors = priors.aligned_to(lr.ids)
    weights = lr.values * priors.values
    chosen = set(selection.selected)
    part_params = selection.params.get("parts", {})
    lines = [_meta_lines(meta), "id,panel,lr,weight,selected,threshold,method\n"]
    for k, member in enumerate(lr.ids):
        panel = panels.get(member, "")
        threshold = part_params.get(panel, {}).get("threshold", selection.threshold)
        lines.append(
            f"{member},{panel},{_fmt(float(lr.values[k]))},{_fmt(float(weights[k]))},"
            f"{int(member in chosen)},{_fmt(float(threshold))},{selection.method}\n"
        )
    _atomic_write(Path(path), "".join(lines))

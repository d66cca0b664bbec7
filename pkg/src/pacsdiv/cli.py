"""Command-line front end: analysis commands with CSV/JSON export.

Every command loads the corpus, computes one table, and writes it to
``<command>.<format>`` plus a ``<command>.meta.json`` sidecar recording
the resolved configuration, a fingerprint of the input file and the tool
version. Writes are atomic (temp file + rename) and all orderings are
explicitly sorted, so identical input and configuration produce
byte-identical outputs at any parallelism degree.

Configuration comes from flags, optionally layered over a JSON config
file (flags win), with built-in defaults: windows 1985-1990 through
2005-2010 in five-year steps, cohorts 1985-1994 and 1994-2003, horizon
10, groups 0-3/4-9/10-27/28+, bands 0-2/3-5/6+.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from . import cohorts as co
from .corpus import Corpus, IngestConfig, corpus_summary, load_corpus, papers_with_pacs_fraction_by_year
from .diversity import compute_diversities, pacs_count_distributions, weitzman_diversity
from .errors import (
    ConfigError,
    DuplicateDoi,
    EmptyCohort,
    EmptyPeriod,
    FormatError,
    IoFailure,
    OverlappingWindows,
    PacsDivError,
    UnknownAuthor,
)
from .years import YearRange, parse_year_range, parse_year_ranges

OUT_DIR_ENV = "PACSDIV_OUT_DIR"

DEFAULTS: dict[str, Any] = {
    "format": "csv",
    "windows": "1985-90,1990-95,1995-00,2000-05,2005-10",
    "cohorts": "1985-1994,1994-2003",
    "horizon": 10,
    "groups": "0-3,4-9,10-27,28+",
    "bands": "0-2,3-5,6+",
    "period": None,
    "include_zero_pacs": False,
    "author_mode": "windowed",
    "lenient": False,
    "jobs": 1,
}

EXIT_CODES: dict[type, int] = {
    ConfigError: 2,
    IoFailure: 3,
    FormatError: 4,
    DuplicateDoi: 5,
    EmptyPeriod: 6,
    EmptyCohort: 7,
    OverlappingWindows: 8,
    UnknownAuthor: 9,
}
EXIT_OTHER = 1


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one command invocation."""

    input: Path
    out_dir: Path
    format: str
    windows: tuple[YearRange, ...]
    cohorts: tuple[YearRange, ...]
    period: YearRange | None
    horizon: int
    groups: co.DiversityGroupScheme
    bands: co.DiversityGroupScheme
    include_zero_pacs: bool
    author_mode: str
    lenient: bool
    jobs: int
    raw: dict[str, Any]


# ---------------------------------------------------------------------------
# tables

CellKind = str  # "str" | "int" | "frac" | "auto"


@dataclass(frozen=True)
class Table:
    columns: tuple[tuple[str, CellKind], ...]
    rows: tuple[tuple, ...]


def _csv_cell(kind: CellKind, value) -> str:
    if kind == "frac":
        return f"{value:.6f}"
    if kind == "auto" and isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _json_cell(kind: CellKind, value):
    if kind == "frac" or (kind == "auto" and isinstance(value, float)):
        return round(value, 6)
    return value


def render_csv(table: Table) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([name for name, _ in table.columns])
    for row in table.rows:
        writer.writerow([_csv_cell(kind, v) for (_, kind), v in zip(table.columns, row)])
    return buf.getvalue().encode("utf-8")


def render_json(table: Table) -> bytes:
    rows = [
        {name: _json_cell(kind, v) for (name, kind), v in zip(table.columns, row)}
        for row in table.rows
    ]
    return (json.dumps(rows, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _atomic_write(path: Path, payload: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# command builders


def _resolved_period(corpus: Corpus, cfg: RunConfig) -> YearRange:
    return cfg.period if cfg.period is not None else corpus.year_span()


def build_summary(corpus: Corpus, cfg: RunConfig) -> Table:
    stats = corpus_summary(corpus, _resolved_period(corpus, cfg))
    rows = (
        ("papers", stats.papers),
        ("authors", stats.authors),
        ("papers_per_author", stats.papers_per_author),
        ("authors_per_paper", stats.authors_per_paper),
        ("pacs_codes_per_author", stats.codes_per_author),
        ("pacs_codes_per_paper", stats.codes_per_paper),
        ("author_diversity_mean", stats.author_diversity_mean),
        ("paper_diversity_mean", stats.paper_diversity_mean),
        ("citations_per_paper", stats.citations_per_paper),
    )
    return Table((("statistic", "str"), ("value", "auto")), rows)


def build_pacs_coverage(corpus: Corpus, cfg: RunConfig) -> Table:
    fractions = papers_with_pacs_fraction_by_year(corpus)
    rows = tuple((year, frac) for year, frac in sorted(fractions.items()))
    return Table((("year", "int"), ("fraction", "frac")), rows)


def build_pacs_counts(corpus: Corpus, cfg: RunConfig) -> Table:
    period = _resolved_period(corpus, cfg)
    authors, papers = pacs_count_distributions(corpus, period, cfg.include_zero_pacs)
    rows = [("author", n, f) for n, f in sorted(authors.items())]
    rows += [("paper", n, f) for n, f in sorted(papers.items())]
    return Table((("entity", "str"), ("code_count", "int"), ("fraction", "frac")), tuple(rows))


def build_diversity_dist(corpus: Corpus, cfg: RunConfig) -> Table:
    period = _resolved_period(corpus, cfg)
    unions: dict[str, set] = {}
    paper_sets = []
    for record in corpus.papers_in(period):
        paper_sets.append(record.pacs)
        for author in record.authors:
            unions.setdefault(author, set()).update(record.pacs)

    author_values = [
        weitzman_diversity(u) for u in unions.values() if u or cfg.include_zero_pacs
    ]
    paper_values = compute_diversities(
        [s for s in paper_sets if s or cfg.include_zero_pacs], cfg.jobs
    )
    rows: list[tuple] = []
    for entity, values in (("author", author_values), ("paper", paper_values)):
        total = len(values)
        if not total:
            continue
        counts: dict[int, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        rows += [(entity, d, c / total) for d, c in sorted(counts.items())]
    return Table((("entity", "str"), ("diversity", "int"), ("fraction", "frac")), tuple(rows))


def build_groups(corpus: Corpus, cfg: RunConfig) -> Table:
    table = co.group_fraction_table(
        corpus, cfg.windows, cfg.groups, cfg.author_mode, cfg.include_zero_pacs
    )
    columns = (("window", "str"),) + tuple((label, "frac") for label in cfg.groups.labels)
    rows = tuple(
        (window,) + tuple(fractions[label] for label in cfg.groups.labels)
        for window, fractions in table.items()
    )
    return Table(columns, rows)


def build_flows(corpus: Corpus, cfg: RunConfig) -> Table:
    matrices = co.transition_flows(
        corpus, cfg.windows, cfg.groups, cfg.author_mode, cfg.include_zero_pacs
    )
    rows: list[tuple] = []
    for m in matrices:
        pair = (m.from_window.label, m.to_window.label)
        for fl in m.labels:
            for tl in m.labels:
                rows.append(pair + ("flow", fl, tl, m.flow[fl][tl]))
        for tl in m.labels:
            rows.append(pair + ("entrants", "", tl, m.entrants[tl]))
        for fl in m.labels:
            rows.append(pair + ("leavers", fl, "", m.leavers[fl]))
    columns = (
        ("from_window", "str"),
        ("to_window", "str"),
        ("kind", "str"),
        ("from_group", "str"),
        ("to_group", "str"),
        ("count", "int"),
    )
    return Table(columns, tuple(rows))


def _series_rows(label_prefix: tuple, series: co.CitationSeries) -> list[tuple]:
    rows = []
    for key, entry in series.per_key.items():
        for age in range(series.horizon + 1):
            rows.append(
                label_prefix
                + (
                    key,
                    age,
                    entry.paper_count,
                    entry.citations_per_age[age],
                    entry.mean_per_age[age],
                    entry.cumulative_mean[age],
                )
            )
    return rows


def build_citation_age(corpus: Corpus, cfg: RunConfig) -> Table:
    series = co.citations_by_age(corpus, _resolved_period(corpus, cfg), cfg.horizon)
    entry = series.per_key["all"]
    rows = tuple(
        (
            age,
            entry.paper_count,
            entry.citations_per_age[age],
            entry.mean_per_age[age],
            entry.cumulative_mean[age],
        )
        for age in range(cfg.horizon + 1)
    )
    columns = (
        ("age", "int"),
        ("papers", "int"),
        ("citations", "int"),
        ("mean_citations", "frac"),
        ("cumulative_mean", "frac"),
    )
    return Table(columns, rows)


def build_diversity_citations(corpus: Corpus, cfg: RunConfig) -> Table:
    rows: list[tuple] = []
    for cohort in cfg.cohorts:
        for keying_name, scheme in (("integer", co.CITATION_KEY_SCHEME), ("band", cfg.bands)):
            series = co.citations_by_diversity(
                corpus, cohort, cfg.horizon, scheme, cfg.include_zero_pacs, cfg.jobs
            )
            rows += _series_rows((cohort.label, keying_name), series)
    columns = (
        ("cohort", "str"),
        ("keying", "str"),
        ("key", "str"),
        ("age", "int"),
        ("papers", "int"),
        ("citations", "int"),
        ("mean_citations", "frac"),
        ("cumulative_mean", "frac"),
    )
    return Table(columns, tuple(rows))


def build_citation_dist(corpus: Corpus, cfg: RunConfig) -> Table:
    rows: list[tuple] = []
    for cohort in cfg.cohorts:
        dists = co.citation_distribution_by_diversity(
            corpus, cohort, cfg.horizon, cfg.include_zero_pacs, cfg.jobs
        )
        for key, hist in dists.items():
            for citations in sorted(hist):
                rows.append((cohort.label, key, citations, hist[citations]))
    columns = (
        ("cohort", "str"),
        ("key", "str"),
        ("citations", "int"),
        ("fraction", "frac"),
    )
    return Table(columns, tuple(rows))


def build_share(corpus: Corpus, cfg: RunConfig) -> Table:
    table = co.diversity_share_table(corpus, cfg.cohorts, cfg.include_zero_pacs, cfg.jobs)
    cohort_labels = list(table.keys())
    columns = (("diversity", "str"),) + tuple((label, "frac") for label in cohort_labels)
    rows = tuple(
        (key,) + tuple(table[cohort][key] for cohort in cohort_labels)
        for key in co.SHARE_KEY_SCHEME.labels
    )
    return Table(columns, rows)


def build_validate(corpus: Corpus, cfg: RunConfig) -> Table:
    stats = corpus.ingest_stats
    pairs = sum(len(v) for v in corpus.citations_in.values())
    years = [p.pub_year for p in corpus.papers.values()]
    rows = tuple(
        [("papers", len(corpus.papers)), ("authors", len(corpus.papers_by_author))]
        + sorted(stats.as_dict().items())
        + [
            ("citation_pairs_in_corpus", pairs),
            ("year_min", min(years) if years else 0),
            ("year_max", max(years) if years else 0),
        ]
    )
    return Table((("metric", "str"), ("value", "int")), rows)


COMMANDS: dict[str, Callable[[Corpus, RunConfig], Table]] = {
    "summary": build_summary,
    "pacs-coverage": build_pacs_coverage,
    "pacs-counts": build_pacs_counts,
    "diversity-dist": build_diversity_dist,
    "groups": build_groups,
    "flows": build_flows,
    "citation-age": build_citation_age,
    "diversity-citations": build_diversity_citations,
    "citation-dist": build_citation_dist,
    "share": build_share,
    "validate": build_validate,
}


# ---------------------------------------------------------------------------
# configuration


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON Lines metadata file")
    common.add_argument("--out-dir", dest="out_dir", help=f"output directory (default ${OUT_DIR_ENV} or .)")
    common.add_argument("--format", choices=("csv", "json"), help="table format (default csv)")
    common.add_argument("--config", help="JSON config file; explicit flags win")
    common.add_argument("--windows", help="comma-separated year windows, e.g. 1985-90,1990-95")
    common.add_argument("--cohorts", help="comma-separated cohort year ranges")
    common.add_argument("--period", help="year range for summary/coverage-style commands (default: full corpus span)")
    common.add_argument("--horizon", type=int, help="citation horizon in years (default 10)")
    common.add_argument("--groups", help="diversity group boundaries, e.g. 0-3,4-9,10-27,28+")
    common.add_argument("--bands", help="diversity band boundaries, e.g. 0-2,3-5,6+")
    common.add_argument(
        "--include-zero-pacs",
        dest="include_zero_pacs",
        action="store_true",
        default=None,
        help="admit papers without codes into diversity-keyed tables as diversity 0",
    )
    common.add_argument(
        "--author-mode",
        dest="author_mode",
        choices=("windowed", "cumulative"),
        help="author diversity from window-only codes or cumulative-to-window codes",
    )
    common.add_argument(
        "--lenient",
        action="store_true",
        default=None,
        help="skip and count malformed lines instead of aborting",
    )
    common.add_argument("--jobs", type=int, help="worker processes for per-paper computations")

    parser = argparse.ArgumentParser(
        prog="pacsdiv",
        description="Weitzman diversity and citation analysis over PACS-coded paper metadata",
    )
    parser.add_argument("--version", action="version", version=f"pacsdiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    help_lines = {
        "summary": "corpus-level averages over a period",
        "pacs-coverage": "fraction of papers with codes, per year",
        "pacs-counts": "code-count distributions for authors and papers",
        "diversity-dist": "diversity distributions for authors and papers",
        "groups": "fraction of authors per diversity group, per window",
        "flows": "author transition flows between groups across windows",
        "citation-age": "average citations per paper at each age",
        "diversity-citations": "citation trajectories grouped by paper diversity",
        "citation-dist": "citation-count distribution per diversity key",
        "share": "percentage of papers per diversity value, per cohort",
        "validate": "ingest report only (always lenient)",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=help_lines[name])
    return parser


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise IoFailure(f"cannot open config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    unknown = set(data) - set(DEFAULTS) - {"input", "out_dir"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Layer defaults, config file and explicit flags into a RunConfig."""
    settings: dict[str, Any] = dict(DEFAULTS)
    settings["input"] = None
    settings["out_dir"] = os.environ.get(OUT_DIR_ENV, ".")
    if args.config:
        settings.update(_load_config_file(args.config))
    for key in list(settings):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value

    if not settings["input"]:
        raise ConfigError("no input file given (--input or config)")
    if settings["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {settings['format']!r}")
    if settings["author_mode"] not in co.AUTHOR_MODES:
        raise ConfigError(f"author-mode must be one of {co.AUTHOR_MODES}")
    try:
        horizon = int(settings["horizon"])
        jobs = int(settings["jobs"])
    except (TypeError, ValueError):
        raise ConfigError(
            f"horizon and jobs must be integers, got {settings['horizon']!r}, {settings['jobs']!r}"
        ) from None
    if horizon < 1:
        raise ConfigError(f"horizon must be >= 1, got {horizon}")
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")

    period = settings["period"]
    return RunConfig(
        input=Path(settings["input"]),
        out_dir=Path(settings["out_dir"]),
        format=settings["format"],
        windows=tuple(parse_year_ranges(settings["windows"])),
        cohorts=tuple(parse_year_ranges(settings["cohorts"])),
        period=parse_year_range(period) if period else None,
        horizon=horizon,
        groups=co.group_scheme_from_spec(settings["groups"]),
        bands=co.band_scheme_from_spec(settings["bands"]),
        include_zero_pacs=bool(settings["include_zero_pacs"]),
        author_mode=settings["author_mode"],
        lenient=bool(settings["lenient"]),
        jobs=jobs,
        raw={k: settings[k] for k in sorted(settings) if k != "out_dir"},
    )


# ---------------------------------------------------------------------------
# run


def _sha256(path: Path) -> tuple[str, int]:
    digest = hashlib.sha256()
    size = 0
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
            size += len(block)
    return digest.hexdigest(), size


def _meta_payload(command: str, corpus: Corpus, cfg: RunConfig, resolved_period: str) -> bytes:
    sha, size = _sha256(cfg.input)
    years = [p.pub_year for p in corpus.papers.values()]
    meta = {
        "command": command,
        "tool": "pacsdiv",
        "version": __version__,
        "input": {"path": str(cfg.input), "sha256": sha, "size_bytes": size},
        "settings": {
            "format": cfg.format,
            "windows": [w.label for w in cfg.windows],
            "cohorts": [c.label for c in cfg.cohorts],
            "period": resolved_period,
            "horizon": cfg.horizon,
            "groups": {label: list(b) for label, b in zip(cfg.groups.labels, cfg.groups.bounds)},
            "bands": {label: list(b) for label, b in zip(cfg.bands.labels, cfg.bands.bounds)},
            "include_zero_pacs": cfg.include_zero_pacs,
            "author_mode": cfg.author_mode,
            "lenient": cfg.lenient,
            "jobs": cfg.jobs,
        },
        "corpus": {
            "papers": len(corpus.papers),
            "authors": len(corpus.papers_by_author),
            "citation_pairs": sum(len(v) for v in corpus.citations_in.values()),
            "year_min": min(years) if years else None,
            "year_max": max(years) if years else None,
        },
        "ingest": corpus.ingest_stats.as_dict(),
    }
    return (json.dumps(meta, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def run(command: str, cfg: RunConfig) -> list[Path]:
    """Execute one command and write its output files atomically.

    Returns the paths written: the table, its meta sidecar, and a
    dropped-records report when any input line was rejected.
    """
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    lenient = cfg.lenient or command == "validate"
    corpus = load_corpus(cfg.input, IngestConfig(strict=not lenient))

    try:
        resolved_period = _resolved_period(corpus, cfg).label
    except EmptyPeriod:
        resolved_period = None
    table = COMMANDS[command](corpus, cfg)
    payload = render_csv(table) if cfg.format == "csv" else render_json(table)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out_path = cfg.out_dir / f"{command}.{cfg.format}"
    meta_path = cfg.out_dir / f"{command}.meta.json"
    written = [out_path, meta_path]
    _atomic_write(out_path, payload)
    _atomic_write(meta_path, _meta_payload(command, corpus, cfg, resolved_period))

    stats = corpus.ingest_stats
    if stats.lines_rejected:
        report = {
            "lines_rejected": stats.lines_rejected,
            "lines": [{"line": lineno, "reason": reason} for lineno, reason in stats.rejected_lines],
        }
        dropped_path = cfg.out_dir / f"{command}.dropped.json"
        _atomic_write(
            dropped_path,
            (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8"),
        )
        written.append(dropped_path)
    return written


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        written = run(args.command, cfg)
    except PacsDivError as exc:
        code = EXIT_CODES.get(type(exc), EXIT_OTHER)
        print(f"pacsdiv {args.command}: error: {exc}", file=sys.stderr)
        return code
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())

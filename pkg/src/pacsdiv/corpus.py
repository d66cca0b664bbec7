"""Corpus loading: article metadata, author identities, citation index.

Input is JSON Lines, one object per line with fields doi, title,
authors, date (ISO-8601), pacs, refs; unknown fields are ignored. A
loaded corpus is immutable: every analysis in the package is a pure read
over it, and loading the same file twice yields identical contents.

Citations are derived strictly in-corpus: a reference counts only when
the target DOI is also present in the file. References to anything else
are tallied as dangling. Citation age is the calendar-year difference
between the citing and cited papers; negative ages are kept in the index
(they are reference pairs) but counted at load time so age-based
analyses can skip them as data errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date
from typing import Iterator, Mapping, NewType

from . import diversity
from .errors import DuplicateDoi, EmptyPeriod, FormatError, IoFailure, MalformedCode
from .taxonomy import PacsCode, parse_pacs
from .years import YearRange

__all__ = [
    "AuthorId",
    "normalize_author",
    "PaperRecord",
    "IngestConfig",
    "IngestStats",
    "Corpus",
    "load_corpus",
    "papers_with_pacs_fraction_by_year",
    "SummaryStats",
    "corpus_summary",
]

AuthorId = NewType("AuthorId", str)


def normalize_author(raw: str) -> AuthorId:
    """Normalize an author name: collapse whitespace, case-fold.

    Diacritics are preserved; no transliteration. Idempotent, so already
    normalized identifiers pass through unchanged. Name-string identity
    is the only disambiguation the metadata supports.
    """
    return AuthorId(" ".join(raw.split()).casefold())


@dataclass(frozen=True, slots=True)
class PaperRecord:
    """One article as loaded: identity, authorship, codes, references."""

    doi: str
    title: str
    authors: tuple[AuthorId, ...]
    pub_date: date
    pacs: frozenset[PacsCode]
    refs: tuple[str, ...]

    @property
    def pub_year(self) -> int:
        return self.pub_date.year


@dataclass(frozen=True, slots=True)
class IngestConfig:
    """Knobs for load_corpus.

    strict: a malformed line aborts the load with FormatError; when off,
    bad lines are counted, recorded and skipped.
    known_codes: optional list of canonical "AB.CD" strings; well-formed
    codes outside it are counted as unknown but kept (validation warning
    only, never a distance change).
    """

    strict: bool = True
    known_codes: frozenset[str] | None = None


@dataclass(frozen=True, slots=True)
class IngestStats:
    """Counters accumulated while loading one file."""

    records_accepted: int = 0
    lines_rejected: int = 0
    malformed_pacs_dropped: int = 0
    unknown_codes: int = 0
    dangling_refs: int = 0
    negative_age_citations_skipped: int = 0
    rejected_lines: tuple[tuple[int, str], ...] = ()

    def as_dict(self) -> dict[str, int]:
        return {
            "records_accepted": self.records_accepted,
            "lines_rejected": self.lines_rejected,
            "malformed_pacs_dropped": self.malformed_pacs_dropped,
            "unknown_codes": self.unknown_codes,
            "dangling_refs": self.dangling_refs,
            "negative_age_citations_skipped": self.negative_age_citations_skipped,
        }


@dataclass(frozen=True, slots=True)
class Corpus:
    """Loaded collection of papers plus derived read-only indexes.

    citations_in maps a cited DOI to the (citing DOI, citing pub_year)
    pairs whose citing paper is also in the corpus; DOIs nobody cites
    have no entry. papers_by_author maps normalized names to the DOIs
    they appear on, in file order. Treat every container as frozen.
    """

    papers: Mapping[str, PaperRecord]
    citations_in: Mapping[str, tuple[tuple[str, int], ...]]
    papers_by_author: Mapping[AuthorId, tuple[str, ...]]
    ingest_stats: IngestStats

    def year_span(self) -> YearRange:
        """Half-open range covering every publication year present."""
        years = [p.pub_year for p in self.papers.values()]
        if not years:
            raise EmptyPeriod("corpus has no papers")
        return YearRange(min(years), max(years) + 1)

    def papers_in(self, period: YearRange) -> Iterator[PaperRecord]:
        for record in self.papers.values():
            if record.pub_year in period:
                yield record


_REQUIRED_FIELDS = ("doi", "title", "authors", "date", "pacs", "refs")


def _parse_record(
    obj: object,
    lineno: int,
    code_cache: dict[str, PacsCode | None],
    known: frozenset[str] | None,
    counters: dict[str, int],
) -> PaperRecord:
    if not isinstance(obj, dict):
        raise FormatError(lineno, "record is not a JSON object")
    for name in _REQUIRED_FIELDS:
        if name not in obj:
            raise FormatError(lineno, f"missing field {name!r}")
    doi = obj["doi"]
    title = obj["title"]
    authors = obj["authors"]
    raw_date = obj["date"]
    pacs = obj["pacs"]
    refs = obj["refs"]
    if not isinstance(doi, str) or not doi:
        raise FormatError(lineno, "doi must be a non-empty string")
    if not isinstance(title, str):
        raise FormatError(lineno, "title must be a string")
    if not isinstance(authors, list) or any(not isinstance(a, str) for a in authors):
        raise FormatError(lineno, "authors must be a list of strings")
    if not isinstance(pacs, list) or any(not isinstance(c, str) for c in pacs):
        raise FormatError(lineno, "pacs must be a list of strings")
    if not isinstance(refs, list) or any(not isinstance(r, str) for r in refs):
        raise FormatError(lineno, "refs must be a list of strings")
    if not isinstance(raw_date, str):
        raise FormatError(lineno, "date must be an ISO-8601 string")
    try:
        pub_date = date.fromisoformat(raw_date)
    except ValueError:
        raise FormatError(lineno, f"bad date {raw_date!r}") from None

    codes: set[PacsCode] = set()
    for raw_code in pacs:
        if raw_code in code_cache:
            cached = code_cache[raw_code]
        else:
            try:
                cached = parse_pacs(raw_code)
            except MalformedCode:
                cached = None
            code_cache[raw_code] = cached
        if cached is None:
            counters["malformed"] += 1
        else:
            if known is not None and cached.text not in known:
                counters["unknown"] += 1
            codes.add(cached)

    return PaperRecord(
        doi=doi,
        title=title,
        authors=tuple(normalize_author(a) for a in authors),
        pub_date=pub_date,
        pacs=frozenset(codes),
        refs=tuple(refs),
    )


def load_corpus(path, config: IngestConfig | None = None) -> Corpus:
    """Load a JSON Lines metadata file into an immutable Corpus.

    PACS codes are truncated to level 3 and deduplicated per record;
    malformed codes are dropped and counted. Blank lines are skipped.

    Raises
    ------
    IoFailure
        If the file cannot be read.
    FormatError
        On the first malformed line, unless ``config.strict`` is off.
    DuplicateDoi
        If two records share a DOI (fatal in both modes: downstream
        indexes assume DOI uniqueness).
    """
    cfg = config or IngestConfig()
    papers: dict[str, PaperRecord] = {}
    rejected: list[tuple[int, str]] = []
    counters = {"malformed": 0, "unknown": 0}
    code_cache: dict[str, PacsCode | None] = {}

    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot open {path}: {exc}") from exc

    with handle:
        try:
            lines = enumerate(handle, start=1)
            for lineno, line in lines:
                if not line.strip():
                    continue
                try:
                    try:
                        obj = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise FormatError(lineno, f"invalid JSON: {exc.msg}") from None
                    record = _parse_record(obj, lineno, code_cache, cfg.known_codes, counters)
                except FormatError as exc:
                    if cfg.strict:
                        raise
                    rejected.append((exc.lineno, exc.reason))
                    continue
                if record.doi in papers:
                    raise DuplicateDoi(f"line {lineno}: duplicate doi {record.doi!r}")
                papers[record.doi] = record
        except OSError as exc:
            raise IoFailure(f"error reading {path}: {exc}") from exc

    citations: dict[str, list[tuple[str, int]]] = {}
    by_author: dict[AuthorId, list[str]] = {}
    dangling = 0
    negative_age = 0
    for record in papers.values():
        for author in record.authors:
            dois = by_author.setdefault(author, [])
            if not dois or dois[-1] != record.doi:
                dois.append(record.doi)
        for target in record.refs:
            cited = papers.get(target)
            if cited is None:
                dangling += 1
                continue
            citations.setdefault(target, []).append((record.doi, record.pub_year))
            if record.pub_year < cited.pub_year:
                negative_age += 1

    stats = IngestStats(
        records_accepted=len(papers),
        lines_rejected=len(rejected),
        malformed_pacs_dropped=counters["malformed"],
        unknown_codes=counters["unknown"],
        dangling_refs=dangling,
        negative_age_citations_skipped=negative_age,
        rejected_lines=tuple(rejected),
    )
    return Corpus(
        papers=papers,
        citations_in={doi: tuple(pairs) for doi, pairs in citations.items()},
        papers_by_author={a: tuple(d) for a, d in by_author.items()},
        ingest_stats=stats,
    )


def papers_with_pacs_fraction_by_year(corpus: Corpus) -> dict[int, float]:
    """Per publication year, the fraction of papers carrying any code.

    Years with no papers at all are omitted rather than reported as
    zero-division artifacts.
    """
    totals: dict[int, int] = {}
    with_codes: dict[int, int] = {}
    for record in corpus.papers.values():
        year = record.pub_year
        totals[year] = totals.get(year, 0) + 1
        if record.pacs:
            with_codes[year] = with_codes.get(year, 0) + 1
    return {year: with_codes.get(year, 0) / n for year, n in sorted(totals.items())}


@dataclass(frozen=True, slots=True)
class SummaryStats:
    """Corpus-level averages over one period (whole-unit counting)."""

    period: YearRange
    papers: int
    authors: int
    papers_per_author: float
    authors_per_paper: float
    codes_per_author: float
    codes_per_paper: float
    author_diversity_mean: float
    paper_diversity_mean: float
    citations_per_paper: float


def corpus_summary(corpus: Corpus, period: YearRange) -> SummaryStats:
    """Descriptive statistics over the papers published in ``period``.

    Authors are whoever appears on at least one in-period paper; their
    code unions and diversities are taken over in-period papers only.
    Papers without codes stay in every average here (zero codes, zero
    diversity). Citations per paper counts non-negative-age in-corpus
    citations received by in-period papers from citing papers of any
    year.

    Raises
    ------
    EmptyPeriod
        If no paper falls inside the period.
    """
    in_period = list(corpus.papers_in(period))
    if not in_period:
        raise EmptyPeriod(f"no papers in {period.label}")

    author_union: dict[AuthorId, set[PacsCode]] = {}
    author_papers: dict[AuthorId, int] = {}
    total_authors_listed = 0
    total_codes = 0
    total_paper_div = 0
    total_citations = 0
    for record in in_period:
        total_authors_listed += len(record.authors)
        total_codes += len(record.pacs)
        total_paper_div += diversity.weitzman_diversity(record.pacs)
        for author in record.authors:
            author_papers[author] = author_papers.get(author, 0) + 1
            author_union.setdefault(author, set()).update(record.pacs)
        for _, citing_year in corpus.citations_in.get(record.doi, ()):
            if citing_year >= record.pub_year:
                total_citations += 1

    n_papers = len(in_period)
    n_authors = len(author_papers)
    total_author_div = sum(
        diversity.weitzman_diversity(union) for union in author_union.values()
    )
    return SummaryStats(
        period=period,
        papers=n_papers,
        authors=n_authors,
        papers_per_author=sum(author_papers.values()) / n_authors if n_authors else 0.0,
        authors_per_paper=total_authors_listed / n_papers,
        codes_per_author=sum(len(u) for u in author_union.values()) / n_authors if n_authors else 0.0,
        codes_per_paper=total_codes / n_papers,
        author_diversity_mean=total_author_div / n_authors if n_authors else 0.0,
        paper_diversity_mean=total_paper_div / n_papers,
        citations_per_paper=total_citations / n_papers,
    )

"""Weitzman diversity of PACS subject codes and citation analysis.

The package measures how topically diverse papers and authors are,
using the hierarchical structure of PACS codes as an ultrametric,
and relates that diversity to citation trajectories. Codes are
compared at the first three hierarchy levels; the diversity of a set
is the greedy Weitzman construction over pairwise distances.
"""

from .cohorts import (
    AUTHOR_MODES,
    CITATION_KEY_SCHEME,
    DEFAULT_BAND_SCHEME,
    DEFAULT_GROUP_SCHEME,
    SHARE_KEY_SCHEME,
    CitationSeries,
    DiversityGroupScheme,
    FlowMatrix,
    SeriesEntry,
    assign_group,
    band_scheme_from_spec,
    citation_distribution_by_diversity,
    citations_by_age,
    citations_by_diversity,
    diversity_share_table,
    group_fraction_table,
    group_scheme_from_spec,
    integer_key_scheme,
    transition_flows,
)
from .corpus import (
    AuthorId,
    Corpus,
    IngestConfig,
    IngestStats,
    PaperRecord,
    SummaryStats,
    corpus_summary,
    load_corpus,
    normalize_author,
    papers_with_pacs_fraction_by_year,
)
from .diversity import (
    ORACLE_SIZE_CAP,
    author_diversity,
    compute_diversities,
    diversity_histogram,
    pacs_count_distributions,
    paper_diversity,
    paper_diversity_map,
    weitzman_diversity,
    weitzman_permutation_oracle,
    weitzman_recursive_oracle,
)
from .errors import (
    ConfigError,
    DuplicateDoi,
    EmptyCohort,
    EmptyPeriod,
    EmptySet,
    FormatError,
    IoFailure,
    MalformedCode,
    OverlappingWindows,
    PacsDivError,
    SetTooLarge,
    UnknownAuthor,
)
from .taxonomy import PacsCode, distance, lca_level, parse_pacs, set_distance
from .years import YearRange, parse_year_range, parse_year_ranges

__version__ = "0.1.0"

__all__ = [
    "AUTHOR_MODES",
    "AuthorId",
    "CITATION_KEY_SCHEME",
    "CitationSeries",
    "ConfigError",
    "Corpus",
    "DEFAULT_BAND_SCHEME",
    "DEFAULT_GROUP_SCHEME",
    "DiversityGroupScheme",
    "DuplicateDoi",
    "EmptyCohort",
    "EmptyPeriod",
    "EmptySet",
    "FlowMatrix",
    "FormatError",
    "IngestConfig",
    "IngestStats",
    "IoFailure",
    "MalformedCode",
    "ORACLE_SIZE_CAP",
    "OverlappingWindows",
    "PacsCode",
    "PacsDivError",
    "PaperRecord",
    "SHARE_KEY_SCHEME",
    "SeriesEntry",
    "SetTooLarge",
    "SummaryStats",
    "UnknownAuthor",
    "YearRange",
    "assign_group",
    "author_diversity",
    "band_scheme_from_spec",
    "citation_distribution_by_diversity",
    "citations_by_age",
    "citations_by_diversity",
    "compute_diversities",
    "corpus_summary",
    "distance",
    "diversity_histogram",
    "diversity_share_table",
    "group_fraction_table",
    "group_scheme_from_spec",
    "integer_key_scheme",
    "lca_level",
    "load_corpus",
    "normalize_author",
    "pacs_count_distributions",
    "paper_diversity",
    "paper_diversity_map",
    "papers_with_pacs_fraction_by_year",
    "parse_pacs",
    "parse_year_range",
    "parse_year_ranges",
    "set_distance",
    "transition_flows",
    "weitzman_diversity",
    "weitzman_permutation_oracle",
    "weitzman_recursive_oracle",
]

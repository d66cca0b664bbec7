"""PACS subject codes and the hierarchical distance between them.

PACS codes name physics subfields with up to five hierarchy levels
("04.25.dg": broad field 0, field 04, subfield 04.25, then two
finer letter levels). Everything here works on codes truncated to the
third level -- the first four digits -- because deeper levels are
unstable across scheme revisions. At that depth the hierarchy is purely
positional: two codes' lowest common ancestor is determined by their
shared digit prefix, so no taxonomy file is needed and the distance is
computable from the code text alone.

The distance counts upward steps from a level-3 code to the lowest
common ancestor. All truncated codes sit at the same depth, which makes
the count symmetric and an ultrametric: d(u,w) <= max(d(u,v), d(v,w)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import EmptySet, MalformedCode

__all__ = ["PacsCode", "parse_pacs", "lca_level", "distance", "set_distance"]

_DIGITS = frozenset("0123456789")


@dataclass(frozen=True, order=True, slots=True)
class PacsCode:
    """A PACS code truncated to hierarchy level 3, canonical form "AB.CD".

    level1: broad-field digit; level2: field digit (level1+level2 form the
    leading two-digit pair); level3: the two-digit subfield pair.
    """

    level1: int
    level2: int
    level3: str

    def __post_init__(self):
        if not (0 <= self.level1 <= 9 and 0 <= self.level2 <= 9):
            raise MalformedCode(f"level1/level2 must be single digits, got {self.level1}, {self.level2}")
        if len(self.level3) != 2 or self.level3[0] not in _DIGITS or self.level3[1] not in _DIGITS:
            raise MalformedCode(f"level3 must be exactly two digits, got {self.level3!r}")

    @property
    def text(self) -> str:
        """Canonical "AB.CD" form."""
        return f"{self.level1}{self.level2}.{self.level3}"

    def __str__(self) -> str:
        return self.text


def parse_pacs(raw: str) -> PacsCode:
    """Parse a PACS string, truncating anything beyond the third level.

    Accepts "AB.CD" optionally followed by deeper sub-level characters
    ("04.25.dg" and "04.25.-g" both map to 04.25). Surrounding whitespace
    is trimmed; the discarded tail is never inspected.

    Raises
    ------
    MalformedCode
        If the first four significant positions are not digits in AB.CD
        shape. Legacy codes with letters inside the first four positions
        are rejected rather than coerced.
    """
    s = raw.strip()
    if len(s) < 5 or s[2] != ".":
        raise MalformedCode(f"not in AB.CD shape: {raw!r}")
    a, b, c, d = s[0], s[1], s[3], s[4]
    if a not in _DIGITS or b not in _DIGITS or c not in _DIGITS or d not in _DIGITS:
        raise MalformedCode(f"non-digit in first four positions: {raw!r}")
    return PacsCode(int(a), int(b), c + d)


def lca_level(u: PacsCode, v: PacsCode) -> int:
    """Hierarchy level of the lowest common ancestor of two codes.

    3 = identical codes, 2 = same leading two-digit pair, 1 = same broad
    field digit only, 0 = nothing shared below the root.
    """
    if u.level1 != v.level1:
        return 0
    if u.level2 != v.level2:
        return 1
    if u.level3 != v.level3:
        return 2
    return 3


def distance(u: PacsCode, v: PacsCode) -> int:
    """Ultrametric distance between two level-3 codes: 3 - lca_level.

    The number of upward steps from either code to the lowest common
    ancestor. Symmetric, zero exactly for equal codes, and bounded by 3.
    """
    return 3 - lca_level(u, v)


def set_distance(u: PacsCode, codes: Iterable[PacsCode]) -> int:
    """Minimum distance from ``u`` to any member of a non-empty set.

    This is the marginal diversity an element contributes when added to
    an existing set.

    Raises
    ------
    EmptySet
        If ``codes`` is empty. Diversity accumulation seeds itself with
        one element instead of querying the empty set.
    """
    best = 4
    for v in codes:
        d = distance(u, v)
        if d < best:
            best = d
            if best == 0:
                return 0
    if best == 4:
        raise EmptySet("set_distance against an empty set")
    return best

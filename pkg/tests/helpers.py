"""Shared test utilities: independent oracles and corpus generators.

Everything here recomputes results through a different route than the
library (explicit tree nodes instead of prefix arithmetic, block
counting instead of greedy insertion, raw JSON scans instead of the
loader) so that agreement between the two is meaningful.
"""

import json
import random

from pacsdiv import PacsCode


class _Node:
    __slots__ = ("children",)

    def __init__(self):
        self.children = {}


def build_tree_lca(codes):
    """Explicit 3-level tree; returns an LCA-depth function on the codes.

    Codes are inserted as root -> level1 -> pair -> code paths and the
    LCA depth of two codes is the length of the shared prefix of their
    ancestor chains, compared by node identity.
    """
    root = _Node()
    chains = {}
    for code in codes:
        node = root
        chain = []
        for part in (str(code.level1), f"{code.level1}{code.level2}", code.text):
            node = node.children.setdefault(part, _Node())
            chain.append(node)
        chains[code] = chain

    def lca_depth(u, v):
        depth = 0
        for a, b in zip(chains[u], chains[v]):
            if a is not b:
                break
            depth += 1
        return depth

    return lca_depth


def block_count_diversity(codes):
    """Closed form for the greedy sum on this 3-level ultrametric.

    Joining the b1 level-1 blocks costs 3 each, the extra level-2 blocks
    inside them 2 each, and the remaining codes 1 each:
    3*(b1-1) + 2*(b2-b1) + (n-b2). Independent of any insertion order.
    """
    codes = set(codes)
    if not codes:
        return 0
    b1 = len({c.level1 for c in codes})
    b2 = len({(c.level1, c.level2) for c in codes})
    n = len(codes)
    return 3 * (b1 - 1) + 2 * (b2 - b1) + (n - b2)


def greedy_insertion_sum(seq):
    """Greedy Weitzman sum taking codes exactly in the order given.

    The library function canonicalizes by sorting, so order invariance
    has to be probed through this unsorted variant: every input order
    must land on the same sum.
    """
    from pacsdiv import distance

    seen = []
    total = 0
    for code in seq:
        if code in seen:
            continue
        if seen:
            total += min(distance(code, v) for v in seen)
        seen.append(code)
    return total


def random_code(rng):
    # tight digit pools so small sets still collide at every level
    return PacsCode(rng.randint(0, 3), rng.randint(0, 2), f"{rng.randint(0, 9)}{rng.randint(0, 4)}")


def random_code_set(rng, size):
    out = set()
    while len(out) < size:
        out.add(random_code(rng))
    return out


def raw_citation_ages(path):
    """Citation ages recounted straight from the JSONL file.

    Bypasses the loader entirely: maps doi -> year from the raw records
    and tallies citing-year minus cited-year for every in-file ref.
    Returns {cited_doi: sorted list of ages} (negative ages included).
    """
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                records.append(json.loads(line))
    year = {r["doi"]: int(r["date"][:4]) for r in records}
    ages = {}
    for r in records:
        for target in r["refs"]:
            if target in year:
                ages.setdefault(target, []).append(int(r["date"][:4]) - year[target])
    return {doi: sorted(v) for doi, v in ages.items()}


# ~490 codes over all ten top-level digits, for synthetic corpora
CODE_POOL = [
    PacsCode(a, b, f"{c}{d}")
    for a in range(10)
    for b in range(7)
    for c, d in ((1, 0), (2, 5), (3, 0), (4, 5), (6, 0), (7, 5), (8, 0))
]

# code-count weights for 0..8 codes per paper; mean 2.92
_CODE_COUNT_WEIGHTS = [5, 19, 25, 20, 12, 8, 5, 3, 3]


def synth_corpus(path, n_records, seed=7, dangling_every=997):
    """Write a deterministic synthetic corpus of n_records JSON lines.

    Years climb from 1985 across 25 calendar years, refs point at
    earlier records only (plus a sprinkle of dangling targets), authors
    come from a pool sized to give a few papers per author.
    """
    rng = random.Random(seed)
    n_authors = max(10, n_records // 3)
    counts = rng.choices(range(9), weights=_CODE_COUNT_WEIGHTS, k=n_records)
    with open(path, "w", encoding="utf-8") as handle:
        for i in range(n_records):
            year = 1985 + (i * 25) // n_records
            codes = rng.sample(CODE_POOL, counts[i])
            refs = []
            if i:
                for _ in range(rng.randint(0, 5)):
                    refs.append(f"10.s/{rng.randrange(i)}")
            if i % dangling_every == 1:
                refs.append("10.s/nowhere")
            record = {
                "doi": f"10.s/{i}",
                "title": f"Synthetic record {i}",
                "authors": [
                    f"author {rng.randrange(n_authors)}"
                    for _ in range(rng.randint(1, 4))
                ],
                "date": f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}",
                "pacs": [f"{c.text}.{'abcdefgh'[rng.randrange(8)]}x" for c in codes],
                "refs": refs,
            }
            handle.write(json.dumps(record) + "\n")
    return path

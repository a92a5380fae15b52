"""Mining k-cores: small clusters of high-weight keywords that co-occur.

A k-core is a set of exactly k terms (default 4) drawn from the top-M
terms of the index.  Each candidate set is scored by a convex mix of
normalized pairwise document co-occurrence and normalized aggregate
tf-idf weight; deterministic hill-climbing (grow to size k, then
single-term swaps while the score strictly increases, ties resolved
lexicographically) is restarted once from every pool term, duplicates
are collapsed, and the best Q sets are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .corpus_index import TfIdfIndex


@dataclass(frozen=True)
class KCore:
    terms: tuple[str, ...]  # sorted lexicographically
    score: float


@dataclass(frozen=True)
class MinerConfig:
    k: int = 4
    m: int = 50
    q: int = 10
    lam: float = 0.5

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.k > self.m:
            raise ValueError(f"k={self.k} exceeds candidate pool size m={self.m}")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must be in [0, 1]")


@dataclass
class CoocMatrix:
    """Document-level co-occurrence counts over a candidate term pool.

    ``counts`` is keyed by lexicographically ordered term pairs; the
    diagonal (t, t) holds df(t).  ``weights`` carries each pool term's
    aggregate tf-idf weight so scoring never goes back to the index.
    """

    terms: list[str]
    n_docs: int
    weights: dict[str, float]
    counts: dict[tuple[str, str], int]

    def count(self, t: str, u: str) -> int:
        key = (t, u) if t <= u else (u, t)
        return self.counts.get(key, 0)

    @property
    def max_weight(self) -> float:
        return max(self.weights.values(), default=0.0)


def cooccurrence(index: TfIdfIndex, m: int) -> CoocMatrix:
    """Exact co-occurrence counts over the index's top-m terms."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if len(index.vocab) < 2:
        raise ValueError("vocabulary smaller than 2: nothing to co-occur")
    top = index.top_terms(m)
    terms = [t for t, _ in top]
    docsets = {t: frozenset(index.postings[t]) for t in terms}
    counts: dict[tuple[str, str], int] = {}
    for i, t in enumerate(terms):
        counts[(t, t)] = len(docsets[t])
        for u in terms[i + 1 :]:
            overlap = len(docsets[t] & docsets[u])
            if overlap:
                key = (t, u) if t <= u else (u, t)
                counts[key] = overlap
    return CoocMatrix(terms=terms, n_docs=index.n_docs, weights=dict(top), counts=counts)


def score_kcore(terms: Iterable[str], cooc: CoocMatrix, lam: float = 0.5) -> float:
    """(1-lambda) * cohesion + lambda * weight, both normalized into [0, 1].

    Cohesion sums codoc over all term pairs, divided by C(k,2)*N (its
    maximum); weight sums aggregate tf-idf, divided by k times the pool
    maximum.  Summation runs in sorted term order so equal sets always
    produce bit-equal scores.
    """
    ts = sorted(terms)
    for t in ts:
        if t not in cooc.weights:
            raise ValueError(f"term {t!r} is not in the candidate pool")
    k = len(ts)
    n_pairs = k * (k - 1) // 2
    c_hat = 0.0
    if n_pairs and cooc.n_docs:
        total = sum(cooc.count(t, u) for t, u in combinations(ts, 2))
        c_hat = total / (n_pairs * cooc.n_docs)
    w_hat = 0.0
    if k and cooc.max_weight > 0:
        w_hat = sum(cooc.weights[t] for t in ts) / (k * cooc.max_weight)
    return (1.0 - lam) * c_hat + lam * w_hat


def _grow(seed: str, pool: list[str], cooc: CoocMatrix, config: MinerConfig) -> set[str]:
    members = {seed}
    candidates = sorted(pool)
    while len(members) < config.k:
        best_term = None
        best_score = -1.0
        for t in candidates:
            if t in members:
                continue
            score = score_kcore(members | {t}, cooc, config.lam)
            if score > best_score:
                best_term, best_score = t, score
        members.add(best_term)  # type: ignore[arg-type]
    return members


def _swap_to_local_max(
    members: set[str], pool: list[str], cooc: CoocMatrix, config: MinerConfig
) -> tuple[set[str], float]:
    current = score_kcore(members, cooc, config.lam)
    while True:
        best_score = current
        best_move: tuple[str, str] | None = None
        outside = sorted(set(pool) - members)
        for removed in sorted(members):
            for added in outside:
                score = score_kcore((members - {removed}) | {added}, cooc, config.lam)
                if score > best_score:
                    best_score, best_move = score, (removed, added)
        if best_move is None:
            return members, current
        members = (members - {best_move[0]}) | {best_move[1]}
        current = best_score


def mine_kcores(index: TfIdfIndex, config: MinerConfig = MinerConfig()) -> list[KCore]:
    """Hill-climb from every pool term and return the top-Q distinct cores."""
    if len(index.vocab) < config.k:
        raise ValueError(
            f"vocabulary has {len(index.vocab)} terms, need at least k={config.k}"
        )
    cooc = cooccurrence(index, config.m)
    pool = cooc.terms
    if len(pool) < config.k:
        raise ValueError(
            f"candidate pool has only {len(pool)} nonzero-weight terms, need at least k={config.k}"
        )
    found: dict[tuple[str, ...], float] = {}
    for seed in pool:
        members = _grow(seed, pool, cooc, config)
        members, score = _swap_to_local_max(members, pool, cooc, config)
        found[tuple(sorted(members))] = score
    ranked = sorted(found.items(), key=lambda kv: (-kv[1], kv[0]))
    return [KCore(terms=terms, score=score) for terms, score in ranked[: config.q]]


def save_kcores(kcores: list[KCore], path: str | Path) -> None:
    """TSV rows ``rank<TAB>score<TAB>term1,term2,...`` — score to 6 decimals."""
    lines = [
        f"{rank}\t{core.score:.6f}\t{','.join(core.terms)}"
        for rank, core in enumerate(kcores, start=1)
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_kcores(path: str | Path) -> list[KCore]:
    cores: list[KCore] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected rank<TAB>score<TAB>terms")
        try:
            rank, score = int(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed rank or score") from None
        if rank != lineno:
            raise ValueError(f"{path}:{lineno}: rank {rank} out of sequence")
        terms = tuple(t for t in parts[2].split(",") if t)
        if not terms:
            raise ValueError(f"{path}:{lineno}: empty term list")
        cores.append(KCore(terms=terms, score=score))
    return cores

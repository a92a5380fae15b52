"""Ranked retrieval and precision/recall evaluation.

Documents are scored against an enriched query by summing, over every
query and expansion term, the term's weight times its tf-idf value in the
document.  Effectiveness is reported as precision/recall at the retrieval
cutoff plus the classic 10-point interpolated precision curve, and two
arms are compared: the raw keyword query versus the ontology-expanded
query produced by the refinement pipeline.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .corpus_index import TfIdfIndex
from .expansion import (
    EnrichedQuery,
    Selection,
    identity_enrichment,
    make_query,
    refine,
)
from .kcore_miner import KCore
from .ontology import OntologyGraph
from .thesaurus import Thesaurus

RECALL_LEVELS: tuple[float, ...] = tuple((i + 1) / 10 for i in range(10))


@dataclass(frozen=True)
class RankedResult:
    """One retrieved document with its accumulated relevance score."""

    doc_id: int
    score: float


@dataclass(frozen=True)
class QRel:
    """The set of documents judged relevant for one query."""

    query_id: str
    relevant_docs: frozenset[int]

    def __post_init__(self) -> None:
        if not self.relevant_docs:
            raise ValueError(f"qrel for query {self.query_id!r} has no relevant documents")


@dataclass(frozen=True)
class EvalQuery:
    """One evaluation query: raw text plus a scripted refinement selection.

    The selection script is ``-`` for no selection, or ``concept=<id>``,
    ``sense=<id>``, or both joined with ``;``.
    """

    query_id: str
    raw_query: str
    selection_script: str = "-"


@dataclass(frozen=True)
class ArmStats:
    """Metrics for one retrieval arm of one query."""

    precision: float
    recall: float
    curve: tuple[float, ...]


@dataclass(frozen=True)
class QueryComparison:
    query_id: str
    baseline: ArmStats
    expanded: ArmStats


@dataclass(frozen=True)
class EvalReport:
    """Macro-averaged two-arm comparison with per-query detail retained."""

    per_query: tuple[QueryComparison, ...]
    baseline_curve: tuple[float, ...]
    expanded_curve: tuple[float, ...]
    deltas: tuple[float, ...]
    mean_delta: float


def search(index: TfIdfIndex, enriched: EnrichedQuery, top_n: int = 10) -> list[RankedResult]:
    """Rank documents by summed weight · tfidf over the enriched terms.

    Documents scoring zero are excluded; ties break on ascending doc_id.
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    weighted = enriched.weighted_terms()
    if not weighted:
        raise ValueError("enriched query has no terms")
    scores: dict[int, float] = {}
    for term, weight in weighted:
        posting = index.postings.get(term)
        if not posting:
            continue
        for doc_id in posting:
            scores[doc_id] = scores.get(doc_id, 0.0) + weight * index.tfidf(term, doc_id)
    ranked = [
        RankedResult(doc_id=doc_id, score=score) for doc_id, score in scores.items() if score > 0.0
    ]
    ranked.sort(key=lambda r: (-r.score, r.doc_id))
    return ranked[:top_n]


def precision_recall(results: Sequence[RankedResult], qrel: QRel) -> tuple[float, float]:
    """Precision and recall of the retrieved set against the judgment set."""
    relevant = qrel.relevant_docs
    if not relevant:
        raise ValueError(f"qrel for query {qrel.query_id!r} has no relevant documents")
    retrieved = [r.doc_id for r in results]
    hits = len(set(retrieved) & relevant)
    precision = hits / len(retrieved) if retrieved else 0.0
    recall = hits / len(relevant)
    return precision, recall


def interpolated_curve(results: Sequence[RankedResult], qrel: QRel) -> tuple[float, ...]:
    """Interpolated precision at recall 0.1, 0.2, …, 1.0.

    Walking the ranking, a (recall, precision) point is recorded at every
    relevant hit; the value at level r is the maximum precision over points
    with recall >= r, or 0 when that recall is never reached.  The recall
    comparison is done in integers (10·hits >= level·|relevant|) so grid
    boundaries are exact.
    """
    relevant = qrel.relevant_docs
    if not relevant:
        raise ValueError(f"qrel for query {qrel.query_id!r} has no relevant documents")
    n_relevant = len(relevant)
    points: list[tuple[int, float]] = []  # (hits at this rank, precision at this rank)
    hits = 0
    for rank, result in enumerate(results, start=1):
        if result.doc_id in relevant:
            hits += 1
            points.append((hits, hits / rank))
    curve = []
    for level in range(1, 11):
        eligible = [prec for point_hits, prec in points if 10 * point_hits >= level * n_relevant]
        curve.append(max(eligible) if eligible else 0.0)
    return tuple(curve)


def parse_selection_script(script: str) -> Selection:
    """Parse ``-`` / ``concept=<id>`` / ``sense=<id>`` / both joined by ``;``."""
    script = script.strip()
    if script == "-" or not script:
        return Selection()
    concept_id = None
    sense_id = None
    for part in script.split(";"):
        part = part.strip()
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise ValueError(f"malformed selection script part: {part!r}")
        if key == "concept":
            if concept_id is not None:
                raise ValueError(f"duplicate concept selection in script: {script!r}")
            concept_id = value
        elif key == "sense":
            if sense_id is not None:
                raise ValueError(f"duplicate sense selection in script: {script!r}")
            sense_id = value
        else:
            raise ValueError(f"unknown selection key {key!r} in script: {script!r}")
    return Selection(sense_id=sense_id, concept_id=concept_id)


def compare(
    index: TfIdfIndex,
    queries: Sequence[EvalQuery],
    qrels: Mapping[str, QRel],
    kcores: Sequence[KCore],
    graph: OntologyGraph,
    thesaurus: Thesaurus,
    top_n: int = 10,
) -> EvalReport:
    """Run every query through both arms and macro-average the curves.

    The baseline arm retrieves with the raw keyword terms; the expanded arm
    refines the query with the scripted selection first.  Every query must
    have a judgment set, and every judged document must exist in the index.
    """
    if not queries:
        raise ValueError("no queries to evaluate")
    comparisons = []
    for eval_query in queries:
        qrel = qrels.get(eval_query.query_id)
        if qrel is None:
            raise ValueError(f"missing qrel for query {eval_query.query_id!r}")
        unknown = sorted(set(qrel.relevant_docs) - set(index.documents))
        if unknown:
            raise ValueError(
                f"qrel for query {eval_query.query_id!r} names unknown documents: "
                f"{', '.join(map(str, unknown))}"
            )
        query = make_query(eval_query.raw_query, index.stopwords)
        selection = parse_selection_script(eval_query.selection_script)
        baseline_enriched = identity_enrichment(query)
        expanded_enriched = refine(
            query, kcores, graph, thesaurus, select=lambda _candidates: selection
        )
        comparisons.append(
            QueryComparison(
                query_id=eval_query.query_id,
                baseline=_arm_stats(index, baseline_enriched, qrel, top_n),
                expanded=_arm_stats(index, expanded_enriched, qrel, top_n),
            )
        )
    baseline_curve = _macro_average(c.baseline.curve for c in comparisons)
    expanded_curve = _macro_average(c.expanded.curve for c in comparisons)
    deltas = tuple(e - b for b, e in zip(baseline_curve, expanded_curve))
    return EvalReport(
        per_query=tuple(comparisons),
        baseline_curve=baseline_curve,
        expanded_curve=expanded_curve,
        deltas=deltas,
        mean_delta=sum(deltas) / len(deltas),
    )


def _arm_stats(
    index: TfIdfIndex, enriched: EnrichedQuery, qrel: QRel, top_n: int
) -> ArmStats:
    results = search(index, enriched, top_n=top_n)
    precision, recall = precision_recall(results, qrel)
    return ArmStats(precision=precision, recall=recall, curve=interpolated_curve(results, qrel))


def _macro_average(curves: Iterable[tuple[float, ...]]) -> tuple[float, ...]:
    stacked = list(curves)
    return tuple(sum(curve[i] for curve in stacked) / len(stacked) for i in range(10))


def load_queries(path: str | Path) -> list[EvalQuery]:
    """Read a query file: TSV ``query_id<TAB>raw_query<TAB>selection_script``."""
    queries: list[EvalQuery] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            line = raw_line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 3 tab-separated fields")
            query_id, raw_query, script = parts
            if not query_id or not raw_query:
                raise ValueError(f"{path}:{line_no}: empty query_id or raw_query")
            if query_id in seen:
                raise ValueError(f"{path}:{line_no}: duplicate query_id {query_id!r}")
            seen.add(query_id)
            parse_selection_script(script)  # fail early on malformed scripts
            queries.append(
                EvalQuery(query_id=query_id, raw_query=raw_query, selection_script=script)
            )
    if not queries:
        raise ValueError(f"{path}: no queries found")
    return queries


def load_qrels(path: str | Path) -> dict[str, QRel]:
    """Read a judgment file: TSV ``query_id<TAB>doc_id``, one pair per line."""
    pairs: dict[str, set[int]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw_line in enumerate(handle, start=1):
            line = raw_line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{line_no}: expected 2 tab-separated fields")
            query_id, doc_field = parts
            if not query_id:
                raise ValueError(f"{path}:{line_no}: empty query_id")
            try:
                doc_id = int(doc_field)
            except ValueError:
                raise ValueError(
                    f"{path}:{line_no}: doc_id must be an integer, got {doc_field!r}"
                ) from None
            if doc_id < 0:
                raise ValueError(f"{path}:{line_no}: doc_id must be >= 0, got {doc_id}")
            pairs.setdefault(query_id, set()).add(doc_id)
    if not pairs:
        raise ValueError(f"{path}: no judgments found")
    return {
        query_id: QRel(query_id=query_id, relevant_docs=frozenset(docs))
        for query_id, docs in pairs.items()
    }


def format_report_tsv(report: EvalReport) -> str:
    """Render the macro-averaged comparison as TSV.

    One row per recall level per arm (baseline, expanded, delta) plus a
    trailing summary row with the mean delta.
    """
    lines = ["arm\trecall\tinterpolated_precision"]
    for arm, curve in (
        ("baseline", report.baseline_curve),
        ("expanded", report.expanded_curve),
        ("delta", report.deltas),
    ):
        for level, value in zip(RECALL_LEVELS, curve):
            lines.append(f"{arm}\t{level:.1f}\t{value:.6f}")
    lines.append(f"summary\tmean_delta\t{report.mean_delta:.6f}")
    return "\n".join(lines) + "\n"


def format_report_table(report: EvalReport) -> str:
    """Render the macro-averaged comparison as an aligned text table."""
    header = f"{'recall':>6}  {'baseline':>9}  {'expanded':>9}  {'delta':>9}"
    rows = [header, "-" * len(header)]
    for level, baseline, expanded, delta in zip(
        RECALL_LEVELS, report.baseline_curve, report.expanded_curve, report.deltas
    ):
        rows.append(f"{level:>6.1f}  {baseline:>9.6f}  {expanded:>9.6f}  {delta:>+9.6f}")
    rows.append("-" * len(header))
    rows.append(f"mean delta: {report.mean_delta:+.6f}")
    return "\n".join(rows) + "\n"

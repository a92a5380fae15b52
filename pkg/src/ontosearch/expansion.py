"""Query refinement: k-core matching, sense disambiguation, concept
extraction, and enriched-query construction.

The five steps, in order: (1) rank the mined k-cores by overlap with
the query, (2) score each ambiguous query term's senses by bag overlap
against the query-plus-core context, (3) map core terms onto ontology
concepts and rank candidates by mean hierarchy similarity, (4) hand the
candidates to a selection callback (interactive prompt, HTTP parameter,
or script), and (5) reformulate the query with weighted expansion
terms from the chosen sense and concept.  No selection means identity
expansion: the original query passes through unchanged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .corpus_index import tokenize
from .kcore_miner import KCore
from .ontology import OntologyGraph
from .thesaurus import Synset, Thesaurus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Query:
    raw: str
    terms: tuple[str, ...]


def make_query(raw: str, stopwords: frozenset[str] = frozenset()) -> Query:
    return Query(raw=raw, terms=tuple(tokenize(raw, stopwords)))


@dataclass(frozen=True)
class SenseCandidate:
    sense_id: str
    lemma: str
    score: int
    gloss: str


@dataclass(frozen=True)
class ConceptCandidate:
    concept_id: str
    similarity_score: float
    supporting_kcore: KCore
    matched_terms: tuple[str, ...]


@dataclass(frozen=True)
class ExpansionTerm:
    term: str
    weight: float
    tag: str


@dataclass(frozen=True)
class EnrichedQuery:
    original_terms: tuple[str, ...]
    expansion_terms: tuple[ExpansionTerm, ...]
    chosen_sense: str | None = None
    chosen_concept: str | None = None

    def serialize(self) -> str:
        """Canonical single-line form, used by --explain, the API, and tests.

        Original terms come first in query order at weight 1; expansion
        terms follow in their canonical (-weight, term) order.
        """
        parts = [f"{t}:1.000000:original" for t in self.original_terms]
        parts += [f"{e.term}:{e.weight:.6f}:{e.tag}" for e in self.expansion_terms]
        return (
            f"terms={'|'.join(parts)}"
            f";sense={self.chosen_sense or '-'}"
            f";concept={self.chosen_concept or '-'}"
        )

    def weighted_terms(self) -> list[tuple[str, float]]:
        """Original terms at weight 1.0 followed by the expansions."""
        out = [(t, 1.0) for t in self.original_terms]
        out += [(e.term, e.weight) for e in self.expansion_terms]
        return out


@dataclass(frozen=True)
class Selection:
    sense_id: str | None = None
    concept_id: str | None = None


@dataclass
class Candidates:
    """Everything step 4 presents for selection."""

    senses: dict[str, list[SenseCandidate]]
    concepts: list[ConceptCandidate]
    kcores: list[tuple[KCore, float]]


SelectionCallback = Callable[[Candidates], "Selection | None"]


def _unigrams(text: str) -> list[str]:
    """Split a label, alias, or multi-word lemma into index-shaped tokens."""
    return tokenize(text)


def _dedup(terms) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for t in terms:
        seen.setdefault(t, None)
    return tuple(seen)


def _synonym_expansion(terms, thesaurus: Thesaurus) -> set[str]:
    """One-hop thesaurus lemmas for every sense of every term, as unigrams."""
    out: set[str] = set()
    for term in terms:
        for synset in thesaurus.senses(term):
            for lemma, _weight, _tag in thesaurus.neighborhood(synset.sense_id, term):
                out.update(_unigrams(lemma))
    return out - set(terms)


def match_kcores(
    query: Query, kcores: list[KCore], thesaurus: Thesaurus
) -> list[tuple[KCore, float]]:
    """Rank cores by query overlap: 1 per shared term, 0.5 per shared synonym.

    Zero-relevance cores are dropped; ties keep the cores' input (score)
    order.
    """
    qterms = set(query.terms)
    synonyms = _synonym_expansion(query.terms, thesaurus)
    ranked: list[tuple[float, int, KCore]] = []
    for rank, core in enumerate(kcores):
        members = set(core.terms)
        relevance = len(qterms & members) + 0.5 * len(synonyms & members)
        if relevance > 0:
            ranked.append((relevance, rank, core))
    ranked.sort(key=lambda r: (-r[0], r[1]))
    return [(core, relevance) for relevance, _, core in ranked]


def _sense_bag(synset: Synset, thesaurus: Thesaurus, stopwords: frozenset[str]) -> set[str]:
    bag: set[str] = set()
    for w in synset.words:
        bag.update(_unigrams(w))
    bag.update(tokenize(synset.gloss, stopwords))
    for sid in (*synset.hypernyms, *synset.hyponyms):
        for w in thesaurus.synsets[sid].words:
            bag.update(_unigrams(w))
    return bag


def disambiguate(
    query: Query,
    relevant_kcores: list[tuple[KCore, float]],
    thesaurus: Thesaurus,
    stopwords: frozenset[str] = frozenset(),
) -> dict[str, list[SenseCandidate]]:
    """Bag-overlap sense scoring per query term.

    The context is the other query terms plus the terms of the top-3
    relevant cores; a sense's bag is its synset words, gloss tokens, and
    one-hop hypernym/hyponym words.  Senses sort by overlap count,
    stable on the thesaurus file order, so an all-zero term keeps its
    dictionary ordering.  Terms found in no synset are omitted.
    """
    core_terms: set[str] = set()
    for core, _rel in relevant_kcores[:3]:
        core_terms.update(core.terms)
    out: dict[str, list[SenseCandidate]] = {}
    for term in _dedup(query.terms):
        synsets = thesaurus.senses(term)
        if not synsets:
            continue
        context = (set(query.terms) - {term}) | core_terms
        candidates = [
            SenseCandidate(
                sense_id=s.sense_id,
                lemma=term,
                score=len(context & _sense_bag(s, thesaurus, stopwords)),
                gloss=s.gloss,
            )
            for s in synsets
        ]
        candidates.sort(key=lambda c: -c.score)  # stable: file order on ties
        out[term] = candidates
    return out


def _term_concept_map(graph: OntologyGraph) -> dict[str, list[str]]:
    mapping: dict[str, set[str]] = {}
    for cid, concept in graph.concepts.items():
        keys = set(_unigrams(concept.label))
        keys.update(concept.synonyms)
        keys.update(concept.acronyms)
        for key in keys:
            mapping.setdefault(key, set()).add(cid)
    return {term: sorted(cids) for term, cids in mapping.items()}


def extract_concepts(
    relevant_kcores: list[tuple[KCore, float]], graph: OntologyGraph
) -> list[ConceptCandidate]:
    """Map core terms to concepts and rank by mean hierarchy similarity.

    A term maps to every concept whose label unigrams, synonyms, or
    acronyms contain it (case-insensitive).  For a candidate concept c,
    each mapped term contributes its best similarity to c among the
    concepts it maps to, and the candidate's score is the mean over
    mapped terms; unmapped terms stay out of the mean.  A concept seen
    from several cores keeps its best-scoring occurrence.
    """
    mapping = _term_concept_map(graph)
    best: dict[str, ConceptCandidate] = {}
    for core, _rel in relevant_kcores:
        term_concepts = {t: mapping[t] for t in core.terms if t in mapping}
        if not term_concepts:
            continue
        touched = sorted({cid for cids in term_concepts.values() for cid in cids})
        for cid in touched:
            contributions = [
                max(graph.concept_similarity(cid, other) for other in others)
                for others in term_concepts.values()
            ]
            score = sum(contributions) / len(contributions)
            candidate = ConceptCandidate(
                concept_id=cid,
                similarity_score=score,
                supporting_kcore=core,
                matched_terms=tuple(sorted(term_concepts)),
            )
            if cid not in best or candidate.similarity_score > best[cid].similarity_score:
                best[cid] = candidate
    ranked = sorted(best.values(), key=lambda c: (-c.similarity_score, c.concept_id))
    return ranked[:10]


def reformulate(
    query: Query,
    chosen_sense: str | None,
    chosen_concept: str | None,
    thesaurus: Thesaurus,
    graph: OntologyGraph,
) -> EnrichedQuery:
    """Build the enriched query from the user's selections.

    Sense expansion carries the thesaurus neighborhood weights (1.0
    synonyms, 0.5 one-hop relations); concept expansion adds the
    concept's label unigrams and synonyms at 1.0 and each direct child's
    label unigrams at the parent-child similarity.  Multi-word lemmas
    and aliases split into unigrams; duplicates keep their maximum
    weight; original query terms are never re-added.
    """
    originals = _dedup(query.terms)
    original_set = set(originals)
    acc: dict[str, ExpansionTerm] = {}

    def add(term_text: str, weight: float, tag: str) -> None:
        for unigram in _unigrams(term_text):
            if unigram in original_set:
                continue
            cur = acc.get(unigram)
            if cur is None or weight > cur.weight:
                acc[unigram] = ExpansionTerm(term=unigram, weight=weight, tag=tag)

    if chosen_sense is not None:
        synset = thesaurus.synsets.get(chosen_sense)
        if synset is None:
            raise ValueError(f"unknown sense_id {chosen_sense!r}")
        source = next((t for t in query.terms if t in synset.words), None)
        for lemma, weight, tag in thesaurus.neighborhood(chosen_sense, source):
            add(lemma, weight, tag)

    if chosen_concept is not None:
        if chosen_concept not in graph.concepts:
            raise ValueError(f"unknown concept {chosen_concept!r}")
        concept = graph.concepts[chosen_concept]
        add(concept.label, 1.0, "concept-label")
        for alias in sorted(concept.synonyms):
            add(alias, 1.0, "concept-synonym")
        for child in graph.children(chosen_concept):
            weight = graph.concept_similarity(chosen_concept, child.concept_id)
            add(child.label, weight, "concept-label")

    expansions = tuple(sorted(acc.values(), key=lambda e: (-e.weight, e.term)))
    return EnrichedQuery(
        original_terms=originals,
        expansion_terms=expansions,
        chosen_sense=chosen_sense,
        chosen_concept=chosen_concept,
    )


def identity_enrichment(query: Query) -> EnrichedQuery:
    """The no-op expansion: deduplicated originals, nothing added."""
    return EnrichedQuery(original_terms=_dedup(query.terms), expansion_terms=())


def candidates(
    query: Query,
    kcores: list[KCore],
    graph: OntologyGraph,
    thesaurus: Thesaurus,
    stopwords: frozenset[str] = frozenset(),
) -> Candidates:
    """Steps 1–3: everything the selection step gets to see."""
    relevant = match_kcores(query, kcores, thesaurus)
    return Candidates(
        senses=disambiguate(query, relevant, thesaurus, stopwords),
        concepts=extract_concepts(relevant, graph),
        kcores=relevant,
    )


def refine(
    query: Query,
    kcores: list[KCore],
    graph: OntologyGraph,
    thesaurus: Thesaurus,
    select: SelectionCallback,
    stopwords: frozenset[str] = frozenset(),
) -> EnrichedQuery:
    """The full pipeline: candidates → selection callback → reformulate.

    A callback returning None (or raising) yields the identity
    expansion — the query passes through with no added terms.
    """
    if not query.terms:
        raise ValueError("empty query after tokenization")
    cand = candidates(query, kcores, graph, thesaurus, stopwords)
    try:
        selection = select(cand)
    except Exception:
        logger.warning("selection callback failed; falling back to identity expansion", exc_info=True)
        selection = None
    if selection is None:
        return identity_enrichment(query)
    return reformulate(query, selection.sense_id, selection.concept_id, thesaurus, graph)

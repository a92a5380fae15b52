"""Read-only HTTP/JSON facade over the loaded stores.

Three GET endpoints drive the interactive loop: ``/api/candidates``
returns the sense, concept, and k-core options for a query,
``/api/search`` retrieves ranked documents for the keyword or the
expanded form of a query, and ``/api/meta`` reports store statistics.
All state is loaded once at startup and never mutated, so every
response is a pure function of the request.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .corpus_index import TfIdfIndex, default_stopwords, load_index
from .evaluation import search
from .expansion import (
    EnrichedQuery,
    candidates,
    identity_enrichment,
    make_query,
    reformulate,
)
from .kcore_miner import KCore, load_kcores
from .ontology import OntologyGraph
from .ontology import load_ontology
from .thesaurus import Thesaurus, load_thesaurus

DEFAULT_PORT = 7878
VALID_MODES = ("keyword", "expanded")


@dataclass(frozen=True)
class ServiceState:
    """Everything a request handler needs, loaded once and never mutated."""

    index: TfIdfIndex
    kcores: tuple[KCore, ...]
    graph: OntologyGraph
    thesaurus: Thesaurus
    top_n: int = 10


def load_state(
    index_path: str | Path,
    kcores_path: str | Path,
    ontology_path: str | Path,
    thesaurus_path: str | Path,
    top_n: int = 10,
    stopwords: frozenset[str] | None = None,
) -> ServiceState:
    """Load all four stores, failing loudly if any file is invalid.

    The persisted index format does not carry the stopword list, so the
    query-time list is attached here; pass the list used at indexing time
    (the packaged english list is the default on both ends).
    """
    index = load_index(index_path)
    index.stopwords = default_stopwords() if stopwords is None else stopwords
    return ServiceState(
        index=index,
        kcores=tuple(load_kcores(kcores_path)),
        graph=load_ontology(ontology_path),
        thesaurus=load_thesaurus(thesaurus_path),
        top_n=top_n,
    )


def _parse_query(state: ServiceState, q: str):
    query = make_query(q, state.index.stopwords)
    if not query.terms:
        raise HTTPException(status_code=400, detail="empty query after tokenization")
    return query


def _enriched_payload(enriched: EnrichedQuery) -> dict:
    terms = [{"term": t, "weight": 1.0, "tag": "original"} for t in enriched.original_terms]
    terms += [
        {"term": e.term, "weight": e.weight, "tag": e.tag} for e in enriched.expansion_terms
    ]
    return {
        "serialized": enriched.serialize(),
        "terms": terms,
        "chosen_sense": enriched.chosen_sense,
        "chosen_concept": enriched.chosen_concept,
    }


def create_app(state: ServiceState) -> FastAPI:
    """Build the FastAPI application around an immutable ServiceState."""
    app = FastAPI(title="ontosearch", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.get("/api/candidates")
    def get_candidates(q: str = ""):
        query = _parse_query(state, q)
        cand = candidates(
            query, list(state.kcores), state.graph, state.thesaurus, state.index.stopwords
        )
        return {
            "query": q,
            "terms": list(query.terms),
            "senses": {
                term: [
                    {
                        "sense_id": s.sense_id,
                        "lemma": s.lemma,
                        "score": s.score,
                        "gloss": s.gloss,
                    }
                    for s in ranked
                ]
                for term, ranked in cand.senses.items()
            },
            "concepts": [
                {
                    "concept_id": c.concept_id,
                    "label": state.graph.concepts[c.concept_id].label,
                    "similarity_score": c.similarity_score,
                    "matched_terms": list(c.matched_terms),
                    "supporting_kcore": list(c.supporting_kcore.terms),
                }
                for c in cand.concepts
            ],
            "kcores": [
                {"terms": list(core.terms), "score": core.score, "relevance": relevance}
                for core, relevance in cand.kcores
            ],
        }

    @app.get("/api/search")
    def get_search(
        q: str = "",
        mode: str = "keyword",
        concept: str | None = None,
        sense: str | None = None,
        n: int | None = None,
    ):
        query = _parse_query(state, q)
        if mode not in VALID_MODES:
            raise HTTPException(
                status_code=400, detail=f"mode must be one of {', '.join(VALID_MODES)}"
            )
        top_n = state.top_n if n is None else n
        if top_n < 1:
            raise HTTPException(status_code=400, detail="n must be >= 1")
        if mode == "keyword":
            enriched = identity_enrichment(query)
        else:
            try:
                enriched = reformulate(query, sense, concept, state.thesaurus, state.graph)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        results = search(state.index, enriched, top_n=top_n)
        return {
            "query": q,
            "mode": mode,
            "enriched_query": _enriched_payload(enriched),
            "results": [
                {
                    "doc_id": r.doc_id,
                    "score": r.score,
                    "source_uri": state.index.documents[r.doc_id].source_uri,
                }
                for r in results
            ],
        }

    @app.get("/api/meta")
    def get_meta():
        return {
            "documents": state.index.n_docs,
            "vocabulary": len(state.index.vocab),
            "kcores": len(state.kcores),
            "concepts": len(state.graph.concepts),
            "relations": len(state.graph.relations),
            "senses": state.thesaurus.sense_count,
            "factor": state.graph.factor,
            "top_n_default": state.top_n,
        }

    return app

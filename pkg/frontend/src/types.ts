/** JSON shapes returned by the ontosearch HTTP service (see ../../API.md). */

export interface SenseCandidate {
  sense_id: string;
  lemma: string;
  score: number;
  gloss: string;
}

export interface ConceptCandidate {
  concept_id: string;
  label: string;
  similarity_score: number;
  matched_terms: string[];
  supporting_kcore: string[];
}

export interface KCoreView {
  terms: string[];
  score: number;
  relevance: number;
}

export interface CandidatesResponse {
  query: string;
  terms: string[];
  senses: Record<string, SenseCandidate[]>;
  concepts: ConceptCandidate[];
  kcores: KCoreView[];
}

export interface WeightedTerm {
  term: string;
  weight: number;
  tag: string;
}

export interface EnrichedQueryView {
  serialized: string;
  terms: WeightedTerm[];
  chosen_sense: string | null;
  chosen_concept: string | null;
}

export interface SearchResult {
  doc_id: number;
  score: number;
  source_uri: string;
}

export interface SearchResponse {
  query: string;
  mode: "keyword" | "expanded";
  enriched_query: EnrichedQueryView;
  results: SearchResult[];
}

export interface MetaResponse {
  documents: number;
  vocabulary: number;
  kcores: number;
  concepts: number;
  relations: number;
  senses: number;
  factor: number;
  top_n_default: number;
}

/**
 * Pure HTML builders. Every function maps API data plus the current
 * selection to a markup string — no fetching, no score arithmetic: numbers
 * are shown exactly as the service sent them.
 */

import type {
  CandidatesResponse,
  ConceptCandidate,
  EnrichedQueryView,
  KCoreView,
  MetaResponse,
  SearchResult,
  SenseCandidate,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Numbers are rendered verbatim — the UI never reformats service values. */
function num(value: number): string {
  return escapeHtml(String(value));
}

export function renderSensePanel(
  senses: Record<string, SenseCandidate[]>,
  selected: string | null
): string {
  const terms = Object.keys(senses);
  if (terms.length === 0) {
    return `<p class="empty">no sense candidates</p>`;
  }
  const groups = terms.map((term) => {
    const cards = (senses[term] ?? []).map((s) => renderSenseCard(s, selected)).join("");
    return `<div class="sense-group"><h4>${escapeHtml(term)}</h4>${cards}</div>`;
  });
  return groups.join("");
}

function renderSenseCard(sense: SenseCandidate, selected: string | null): string {
  const pressed = sense.sense_id === selected;
  return (
    `<button type="button" class="card sense${pressed ? " selected" : ""}"` +
    ` data-sense="${escapeHtml(sense.sense_id)}" aria-pressed="${pressed}">` +
    `<span class="card-title">${escapeHtml(sense.lemma)}` +
    ` <code>${escapeHtml(sense.sense_id)}</code>` +
    ` <span class="score">overlap ${num(sense.score)}</span></span>` +
    `<span class="gloss">${escapeHtml(sense.gloss)}</span>` +
    `</button>`
  );
}

export function renderConceptPanel(
  concepts: ConceptCandidate[],
  selected: string | null
): string {
  if (concepts.length === 0) {
    return `<p class="empty">no concept candidates</p>`;
  }
  return concepts.map((c) => renderConceptCard(c, selected)).join("");
}

function renderConceptCard(concept: ConceptCandidate, selected: string | null): string {
  const pressed = concept.concept_id === selected;
  return (
    `<button type="button" class="card concept${pressed ? " selected" : ""}"` +
    ` data-concept="${escapeHtml(concept.concept_id)}" aria-pressed="${pressed}">` +
    `<span class="card-title">${escapeHtml(concept.label)}` +
    ` <code>${escapeHtml(concept.concept_id)}</code>` +
    ` <span class="score">similarity ${num(concept.similarity_score)}</span></span>` +
    `<span class="detail">matched ${escapeHtml(concept.matched_terms.join(", "))}` +
    ` — core ${escapeHtml(concept.supporting_kcore.join(", "))}</span>` +
    `</button>`
  );
}

export function renderKcorePanel(kcores: KCoreView[]): string {
  if (kcores.length === 0) {
    return `<p class="empty">no matching keyword cores</p>`;
  }
  return kcores
    .map(
      (core) =>
        `<div class="kcore">` +
        core.terms.map((t) => `<span class="chip">${escapeHtml(t)}</span>`).join("") +
        `<span class="score">score ${num(core.score)} · relevance ${num(core.relevance)}</span>` +
        `</div>`
    )
    .join("");
}

/** True when the candidates response offers nothing to pick or inspect. */
export function candidatesEmpty(response: CandidatesResponse): boolean {
  return (
    Object.keys(response.senses).length === 0 &&
    response.concepts.length === 0 &&
    response.kcores.length === 0
  );
}

export function renderResults(results: SearchResult[]): string {
  if (results.length === 0) {
    return `<p class="empty">no matching documents</p>`;
  }
  const items = results
    .map(
      (r) =>
        `<li class="result" data-doc="${num(r.doc_id)}">` +
        `<span class="doc-id">doc ${num(r.doc_id)}</span>` +
        `<span class="score">${num(r.score)}</span>` +
        `<span class="source">${escapeHtml(r.source_uri)}</span>` +
        `</li>`
    )
    .join("");
  return `<ol class="results">${items}</ol>`;
}

/** term:weight:tag chips for the enriched query actually searched. */
export function renderChips(enriched: EnrichedQueryView): string {
  const chips = enriched.terms
    .map(
      (t) =>
        `<span class="chip term-chip tag-${escapeHtml(t.tag)}"` +
        ` title="${escapeHtml(t.tag)}">` +
        `${escapeHtml(t.term)}<span class="weight">${num(t.weight)}</span>` +
        `<span class="tag">${escapeHtml(t.tag)}</span></span>`
    )
    .join("");
  const chosen =
    `<span class="chosen">sense ${escapeHtml(enriched.chosen_sense ?? "—")}` +
    ` · concept ${escapeHtml(enriched.chosen_concept ?? "—")}</span>`;
  return `<div class="chips">${chips}</div>${chosen}`;
}

export function renderError(message: string): string {
  return `<div class="banner error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderMetaLine(meta: MetaResponse): string {
  return escapeHtml(
    `${meta.documents} documents · ${meta.vocabulary} terms · ${meta.kcores} cores · ` +
      `${meta.concepts} concepts · ${meta.senses} senses`
  );
}

/**
 * UI state and its URL encoding.
 *
 * The whole session state lives in the page's query string so browser
 * back/forward restores both the query and the selection, and any view is
 * linkable.
 */

export interface UiState {
  /** Committed query text; "" is the landing page. */
  query: string;
  /** Selected sense id, if any. */
  sense: string | null;
  /** Selected concept id, if any. */
  concept: string | null;
  /**
   * True once the user has made an expansion decision — picked a sense or
   * concept, or explicitly chose "no expansion". The expanded result list
   * renders only when this is set.
   */
  decided: boolean;
}

export const LANDING: UiState = { query: "", sense: null, concept: null, decided: false };

/** Encode state as a query string ("" for the landing page). */
export function encodeState(state: UiState): string {
  if (!state.query) return "";
  const params = new URLSearchParams();
  params.set("q", state.query);
  if (state.sense) params.set("sense", state.sense);
  if (state.concept) params.set("concept", state.concept);
  if (state.decided && !state.sense && !state.concept) params.set("noexp", "1");
  return `?${params.toString()}`;
}

/**
 * Decode a location.search string. A present sense/concept implies the
 * decision was made; `noexp=1` records an explicit "no expansion" choice.
 */
export function decodeState(search: string): UiState {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const query = params.get("q") ?? "";
  if (!query) return { ...LANDING };
  const sense = params.get("sense");
  const concept = params.get("concept");
  const decided = sense !== null || concept !== null || params.get("noexp") === "1";
  return { query, sense, concept, decided };
}

export function statesEqual(a: UiState, b: UiState): boolean {
  return (
    a.query === b.query &&
    a.sense === b.sense &&
    a.concept === b.concept &&
    a.decided === b.decided
  );
}

/**
 * Stale-response guard: each panel keeps one counter, a request takes a
 * token, and only the response holding the newest token may render.
 */
export class LatestWins {
  private seq = 0;

  next(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

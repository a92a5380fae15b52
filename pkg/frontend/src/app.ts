/**
 * Page controller: owns the UI state, keeps it encoded in the URL, talks
 * to the service, and renders every panel. All data shown comes verbatim
 * from API responses — the controller never computes a score itself.
 */

import { ApiClient, ApiError } from "./api.js";
import { parseEvalTsv, renderEvalChart } from "./evalchart.js";
import {
  candidatesEmpty,
  renderChips,
  renderConceptPanel,
  renderError,
  renderKcorePanel,
  renderMetaLine,
  renderResults,
  renderSensePanel,
} from "./render.js";
import {
  LANDING,
  LatestWins,
  decodeState,
  encodeState,
  statesEqual,
  type UiState,
} from "./state.js";

export interface AppIO {
  /** Container the app renders into. */
  root: HTMLElement;
  api: ApiClient;
  /**
   * Record a history entry. `url` is a query string such as "?q=x", or ""
   * meaning "clear the query string".
   */
  navigate(url: string, replace: boolean): void;
  /** The current location.search. */
  currentSearch(): string;
}

const SKELETON = `
<header class="masthead">
  <h1>ontosearch</h1>
  <p class="meta" data-slot="meta"></p>
</header>
<form class="searchbar" data-slot="form">
  <input data-slot="input" name="q" type="search" placeholder="search the corpus…"
         autocomplete="off" aria-label="query">
  <button type="submit">Search</button>
</form>
<div data-slot="error"></div>
<section class="workbench" data-slot="workbench" hidden>
  <div data-slot="candnote"></div>
  <div class="panels">
    <section class="panel">
      <h3>senses</h3>
      <div data-slot="senses"></div>
    </section>
    <section class="panel">
      <h3>concepts</h3>
      <div data-slot="concepts"></div>
    </section>
    <section class="panel">
      <h3>keyword cores</h3>
      <div data-slot="kcores"></div>
    </section>
  </div>
  <div class="actions">
    <button type="button" data-slot="noexp">No expansion</button>
    <span class="hint">pick a sense and/or a concept above, or search without expansion</span>
  </div>
  <div class="columns">
    <section class="column">
      <h3>keyword results</h3>
      <div data-slot="keyword"></div>
    </section>
    <section class="column">
      <h3>expanded results</h3>
      <div data-slot="chips"></div>
      <div data-slot="expanded"></div>
    </section>
  </div>
</section>
<section class="evalbox">
  <h3>evaluation report</h3>
  <textarea data-slot="evaltsv" rows="6"
            placeholder="paste the TSV written by the eval command"></textarea>
  <button type="button" data-slot="evalbtn">Render chart</button>
  <div data-slot="evalchart"></div>
</section>
`;

export class App {
  state: UiState = { ...LANDING };

  private readonly io: AppIO;
  private readonly candidatesGen = new LatestWins();
  private readonly resultsGen = new LatestWins();
  private work: Promise<void> = Promise.resolve();

  constructor(io: AppIO) {
    this.io = io;
    io.root.innerHTML = SKELETON;
    this.bind();
    this.state = decodeState(io.currentSearch());
    // refresh() first: it clears the error banner, so the meta probe's
    // verdict (the first "is the service up" signal) must land after it.
    this.schedule(async () => {
      await this.refresh();
      await this.loadMeta();
    });
  }

  /** Resolves when every scheduled fetch/render has settled. */
  whenIdle(): Promise<void> {
    return this.work;
  }

  /** Re-read the URL after a popstate (back/forward) and re-render. */
  handleLocationChange(): Promise<void> {
    this.state = decodeState(this.io.currentSearch());
    return this.schedule(() => this.refresh());
  }

  private slot(name: string): HTMLElement {
    const el = this.io.root.querySelector(`[data-slot="${name}"]`);
    if (!el) throw new Error(`missing slot ${name}`);
    return el as HTMLElement;
  }

  private bind(): void {
    this.slot("form").addEventListener("submit", (event) => {
      event.preventDefault();
      const input = this.slot("input") as HTMLInputElement;
      this.apply({ query: input.value.trim(), sense: null, concept: null, decided: false });
    });
    this.slot("noexp").addEventListener("click", () => {
      this.apply({ ...this.state, sense: null, concept: null, decided: true });
    });
    this.slot("evalbtn").addEventListener("click", () => this.renderEval());
    // One delegated listener survives every panel re-render.
    this.io.root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement | null;
      if (!target || !target.closest) return;
      const senseCard = target.closest("[data-sense]");
      if (senseCard) {
        this.toggle("sense", (senseCard as HTMLElement).getAttribute("data-sense") ?? "");
        return;
      }
      const conceptCard = target.closest("[data-concept]");
      if (conceptCard) {
        this.toggle("concept", (conceptCard as HTMLElement).getAttribute("data-concept") ?? "");
      }
    });
  }

  private toggle(kind: "sense" | "concept", id: string): void {
    if (!this.state.query || !id) return;
    const next = { ...this.state, [kind]: this.state[kind] === id ? null : id };
    next.decided = next.sense !== null || next.concept !== null;
    this.apply(next);
  }

  /** Commit a state change: record history, then re-render everything. */
  private apply(next: UiState, replace = false): void {
    if (statesEqual(next, this.state)) return;
    this.state = next;
    this.io.navigate(encodeState(next), replace);
    this.schedule(() => this.refresh());
  }

  private schedule(fn: () => Promise<void>): Promise<void> {
    this.work = this.work.then(fn).catch((err) => this.showError(err));
    return this.work;
  }

  private async loadMeta(): Promise<void> {
    try {
      this.slot("meta").innerHTML = renderMetaLine(await this.io.api.meta());
    } catch (err) {
      this.showError(err);
    }
  }

  private async refresh(): Promise<void> {
    this.clearError();
    const { query } = this.state;
    const workbench = this.slot("workbench");
    const input = this.slot("input") as HTMLInputElement;
    if (!query) {
      workbench.hidden = true;
      input.value = "";
      return;
    }
    workbench.hidden = false;
    input.value = query;
    await this.refreshCandidates();
    await this.refreshResults();
  }

  private async refreshCandidates(): Promise<void> {
    const token = this.candidatesGen.next();
    try {
      const response = await this.io.api.candidates(this.state.query);
      if (!this.candidatesGen.isCurrent(token)) return;
      this.slot("candnote").innerHTML = candidatesEmpty(response)
        ? `<p class="empty">no candidates for this query</p>`
        : "";
      this.slot("senses").innerHTML = renderSensePanel(response.senses, this.state.sense);
      this.slot("concepts").innerHTML = renderConceptPanel(
        response.concepts,
        this.state.concept
      );
      this.slot("kcores").innerHTML = renderKcorePanel(response.kcores);
    } catch (err) {
      // Panels keep their previous content; only the banner changes.
      if (this.candidatesGen.isCurrent(token)) this.showError(err);
    }
  }

  private async refreshResults(): Promise<void> {
    const token = this.resultsGen.next();
    const { query, sense, concept, decided } = this.state;

    const keywordPromise = this.io.api.search({ q: query, mode: "keyword" });
    const expandedPromise = decided
      ? this.io.api.search({ q: query, mode: "expanded", sense, concept })
      : null;
    // Both requests run concurrently; the expanded one may reject before (or
    // without) its await below, so give it an observer up front.
    expandedPromise?.catch(() => undefined);

    try {
      const keyword = await keywordPromise;
      if (this.resultsGen.isCurrent(token)) {
        this.slot("keyword").innerHTML = renderResults(keyword.results);
      }
    } catch (err) {
      if (this.resultsGen.isCurrent(token)) this.showError(err);
      return;
    }

    if (!expandedPromise) {
      if (this.resultsGen.isCurrent(token)) {
        this.slot("chips").innerHTML = "";
        this.slot("expanded").innerHTML =
          `<p class="empty">select a sense or concept, or choose “no expansion”</p>`;
      }
      return;
    }

    try {
      const expanded = await expandedPromise;
      if (!this.resultsGen.isCurrent(token)) return;
      this.slot("chips").innerHTML = renderChips(expanded.enriched_query);
      this.slot("expanded").innerHTML = renderResults(expanded.results);
    } catch (err) {
      if (!this.resultsGen.isCurrent(token)) return;
      if (err instanceof ApiError && err.status === 400 && /^unknown /.test(err.detail)) {
        // A selection id the service no longer recognizes (stale link or
        // rebuilt stores): drop the selection and refetch candidates.
        this.showError(`${err.detail} — selection cleared, candidates refreshed`);
        this.state = { ...this.state, sense: null, concept: null, decided: false };
        this.io.navigate(encodeState(this.state), true);
        await this.refreshCandidates();
        await this.refreshResults();
        return;
      }
      this.showError(err);
    }
  }

  private renderEval(): void {
    const text = (this.slot("evaltsv") as HTMLTextAreaElement).value;
    try {
      this.slot("evalchart").innerHTML = renderEvalChart(parseEvalTsv(text));
    } catch (err) {
      this.slot("evalchart").innerHTML = renderError(
        err instanceof Error ? err.message : String(err)
      );
    }
  }

  private showError(err: unknown): void {
    const message =
      err instanceof ApiError ? err.detail : err instanceof Error ? err.message : String(err);
    // The banner slot can be gone if the document was torn down while a
    // request was in flight (tab closed, navigation away); nothing to show.
    const banner = this.io.root.querySelector('[data-slot="error"]');
    if (banner) {
      banner.innerHTML = renderError(message);
    }
  }

  private clearError(): void {
    this.slot("error").innerHTML = "";
  }
}

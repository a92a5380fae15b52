/**
 * Scripted browser sessions against the real service: type a query,
 * inspect candidates, select, and compare the side-by-side result lists.
 * This is the webui's end-to-end acceptance suite.
 */

import { Window } from "happy-dom";
import { afterEach, describe, expect, inject, it } from "vitest";
import { ApiClient, type FetchLike } from "../../src/api.js";
import { App } from "../../src/app.js";

const serviceUrl = inject("serviceUrl");

interface Session {
  win: Window;
  app: App;
  root: HTMLElement;
}

const openWindows: Window[] = [];
afterEach(() => {
  for (const win of openWindows.splice(0)) void win.close();
});

function startSession(options: { path?: string; apiBase?: string } = {}): Session {
  const win = new Window({ url: serviceUrl + (options.path ?? "/") });
  openWindows.push(win);
  win.document.body.innerHTML = '<div id="app"></div>';
  const root = win.document.getElementById("app") as unknown as HTMLElement;
  const api = new ApiClient(
    options.apiBase ?? serviceUrl,
    win.fetch.bind(win) as unknown as FetchLike
  );
  const app = new App({
    root,
    api,
    navigate: (url, replace) => {
      const target = url || "/";
      if (replace) win.history.replaceState(null, "", target);
      else win.history.pushState(null, "", target);
    },
    currentSearch: () => win.location.search,
  });
  return { win, app, root };
}

function submitQuery(session: Session, text: string): Promise<void> {
  const input = session.root.querySelector('[data-slot="input"]') as HTMLInputElement;
  input.value = text;
  const form = session.root.querySelector('[data-slot="form"]');
  const submitEvent = new session.win.Event("submit", { bubbles: true, cancelable: true });
  form?.dispatchEvent(submitEvent as unknown as Event);
  return session.app.whenIdle();
}

function click(session: Session, selector: string): Promise<void> {
  const el = session.root.querySelector(selector);
  if (!el) throw new Error(`nothing matches ${selector}`);
  const clickEvent = new session.win.Event("click", { bubbles: true, cancelable: true });
  el.dispatchEvent(clickEvent as unknown as Event);
  return session.app.whenIdle();
}

/** Doc ids currently listed in the keyword or expanded column. */
function columnDocs(session: Session, slot: "keyword" | "expanded"): number[] {
  const items = session.root.querySelectorAll(`[data-slot="${slot}"] li.result`);
  return Array.from(items).map((li) => Number(li.getAttribute("data-doc")));
}

function slotText(session: Session, slot: string): string {
  return session.root.querySelector(`[data-slot="${slot}"]`)?.textContent ?? "";
}

async function goBack(session: Session): Promise<void> {
  session.win.history.back();
  await new Promise((resolve) => setTimeout(resolve, 20));
  await session.app.handleLocationChange();
}

async function goForward(session: Session): Promise<void> {
  session.win.history.forward();
  await new Promise((resolve) => setTimeout(resolve, 20));
  await session.app.handleLocationChange();
}

describe("scripted search session", () => {
  it("ACCEPTANCE ui-loop: selecting a concept surfaces documents the baseline misses", async () => {
    const session = startSession();
    await session.app.whenIdle();
    expect(slotText(session, "meta")).toContain("10 documents");

    await submitQuery(session, "cancer");

    // Candidate panels are populated; at least one concept is offered.
    const conceptCards = session.root.querySelectorAll("[data-concept]");
    expect(conceptCards.length).toBeGreaterThanOrEqual(1);
    expect(slotText(session, "concepts")).toContain("breast cancer");
    expect(session.root.querySelectorAll("[data-sense]").length).toBeGreaterThanOrEqual(1);

    // Keyword results render immediately; the expanded column waits for a
    // decision.
    expect(columnDocs(session, "keyword")).toEqual([0, 6, 9]);
    expect(columnDocs(session, "expanded")).toEqual([]);
    expect(slotText(session, "expanded")).toContain("select a sense or concept");

    await click(session, '[data-sense="cancer.disease"]');
    await click(session, '[data-concept="breast_cancer"]');

    const keywordDocs = columnDocs(session, "keyword");
    const expandedDocs = columnDocs(session, "expanded");
    expect(keywordDocs).toEqual([0, 6, 9]);
    expect(expandedDocs).toEqual([3, 1, 4, 0, 2, 5, 6, 9]);

    // The expanded list contains documents the baseline never retrieved.
    const onlyExpanded = expandedDocs.filter((doc) => !keywordDocs.includes(doc));
    expect(onlyExpanded.length).toBeGreaterThan(0);
    expect(onlyExpanded).toContain(3);

    // The enriched query is explained with term:weight:tag chips.
    const chips = slotText(session, "chips");
    expect(chips).toContain("carcinoma");
    expect(chips).toContain("0.875");
    expect(chips).toContain("concept-label");
    expect(chips).toContain("sense cancer.disease");
    expect(chips).toContain("concept breast_cancer");

    // Selections are highlighted and encoded in the URL.
    expect(
      session.root
        .querySelector('[data-concept="breast_cancer"]')
        ?.getAttribute("aria-pressed")
    ).toBe("true");
    expect(
      session.root.querySelector('[data-sense="cancer.disease"]')?.getAttribute("aria-pressed")
    ).toBe("true");
    expect(session.win.location.search).toContain("q=cancer");
    expect(session.win.location.search).toContain("sense=cancer.disease");
    expect(session.win.location.search).toContain("concept=breast_cancer");
  });

  it("ACCEPTANCE no-expansion: explicit opt-out renders identical lists", async () => {
    const session = startSession();
    await submitQuery(session, "cancer");
    await click(session, '[data-slot="noexp"]');

    const keywordDocs = columnDocs(session, "keyword");
    const expandedDocs = columnDocs(session, "expanded");
    expect(keywordDocs).toEqual([0, 6, 9]);
    expect(expandedDocs).toEqual(keywordDocs);

    // Same scores too — both lists come verbatim from the service.
    const keywordScores = Array.from(
      session.root.querySelectorAll('[data-slot="keyword"] .score')
    ).map((el) => el.textContent);
    const expandedScores = Array.from(
      session.root.querySelectorAll('[data-slot="expanded"] .score')
    ).map((el) => el.textContent);
    expect(expandedScores).toEqual(keywordScores);
    expect(session.win.location.search).toContain("noexp=1");
  });

  it("re-selection replaces the expanded list", async () => {
    const session = startSession();
    await submitQuery(session, "cancer");
    await click(session, '[data-concept="breast_cancer"]');
    // Concept-only expansion: no sense terms, so the leukemia document (4)
    // is not reached here.
    expect(columnDocs(session, "expanded")).toEqual([3, 1, 0, 2, 5, 6, 9]);
    expect(slotText(session, "chips")).toContain("concept breast_cancer");

    await click(session, '[data-concept="cancer"]');
    expect(columnDocs(session, "expanded")).toEqual([4, 0, 1, 2, 3, 6, 9]);
    expect(slotText(session, "chips")).toContain("concept cancer");
    expect(slotText(session, "chips")).not.toContain("lump");
  });

  it("browser back and forward restore both query and selection", async () => {
    const session = startSession();
    await submitQuery(session, "cancer");
    await click(session, '[data-concept="breast_cancer"]');
    await click(session, '[data-slot="noexp"]');
    expect(columnDocs(session, "expanded")).toEqual([0, 6, 9]);

    await goBack(session);
    expect(session.app.state.concept).toBe("breast_cancer");
    expect(columnDocs(session, "expanded")).toEqual([3, 1, 0, 2, 5, 6, 9]);
    expect(
      session.root
        .querySelector('[data-concept="breast_cancer"]')
        ?.getAttribute("aria-pressed")
    ).toBe("true");

    await goBack(session);
    expect(session.app.state).toEqual({
      query: "cancer",
      sense: null,
      concept: null,
      decided: false,
    });
    expect(columnDocs(session, "expanded")).toEqual([]);
    expect(slotText(session, "expanded")).toContain("select a sense or concept");
    const input = session.root.querySelector('[data-slot="input"]') as HTMLInputElement;
    expect(input.value).toBe("cancer");

    await goForward(session);
    expect(session.app.state.concept).toBe("breast_cancer");
    expect(columnDocs(session, "expanded")).toEqual([3, 1, 0, 2, 5, 6, 9]);
  });

  it("shows the no-candidates state for a vocabulary miss", async () => {
    const session = startSession();
    await submitQuery(session, "zebrafish stripes");
    expect(slotText(session, "candnote")).toContain("no candidates for this query");
    expect(slotText(session, "keyword")).toContain("no matching documents");
    expect(columnDocs(session, "keyword")).toEqual([]);
  });

  it("a stale selection id in the URL clears itself and refreshes candidates", async () => {
    const session = startSession({ path: "/?q=cancer&concept=ghost_concept" });
    await session.app.whenIdle();

    expect(slotText(session, "error")).toContain("unknown concept");
    expect(slotText(session, "error")).toContain("selection cleared");
    expect(session.app.state.concept).toBeNull();
    expect(session.win.location.search).not.toContain("ghost_concept");
    // Candidates are present again and the expanded column is back to the
    // undecided placeholder.
    expect(session.root.querySelectorAll("[data-concept]").length).toBeGreaterThan(0);
    expect(slotText(session, "expanded")).toContain("select a sense or concept");
    expect(columnDocs(session, "keyword")).toEqual([0, 6, 9]);
  });

  it("an unreachable service yields the error banner, keeping typed state", async () => {
    const session = startSession({ apiBase: "http://127.0.0.1:9" });
    await session.app.whenIdle();
    expect(slotText(session, "error")).toContain("cannot reach service");

    await submitQuery(session, "cancer");
    expect(slotText(session, "error")).toContain("cannot reach service");
    const input = session.root.querySelector('[data-slot="input"]') as HTMLInputElement;
    expect(input.value).toBe("cancer");
    expect(session.win.location.search).toContain("q=cancer");
  });

  it("renders a pasted evaluation report as a bar chart", async () => {
    const session = startSession();
    await session.app.whenIdle();
    const textarea = session.root.querySelector('[data-slot="evaltsv"]') as HTMLTextAreaElement;
    textarea.value =
      "arm\trecall\tinterpolated_precision\n" +
      "baseline\t0.1\t1.000000\nbaseline\t0.2\t0.500000\n" +
      "expanded\t0.1\t1.000000\nexpanded\t0.2\t1.000000\n" +
      "delta\t0.1\t0.000000\ndelta\t0.2\t0.500000\n" +
      "summary\tmean_delta\t0.250000\n";
    await click(session, '[data-slot="evalbtn"]');
    const chart = session.root.querySelector('[data-slot="evalchart"]');
    expect(chart?.querySelectorAll(".chart-row").length).toBe(2);
    expect(chart?.textContent).toContain("mean delta +0.250000");

    textarea.value = "not a report";
    await click(session, '[data-slot="evalbtn"]');
    expect(chart?.textContent).toContain("line 1");
  });
});

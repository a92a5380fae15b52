// Full-page boot test: serves the real index.html + built dist/ over HTTP,
// loads it in a scripted browser (happy-dom's Browser API with script
// execution enabled), and drives the page exactly as a user would — typing a
// query, clicking candidate cards — with no access to the application's
// internals. The only change to the served page is the API-base meta tag,
// rewritten to point at the test service's port.
import { spawnSync } from "node:child_process";
import { readFileSync } from "node:fs";
import { createServer, type Server } from "node:http";
import { extname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { Browser } from "happy-dom";
import { afterAll, beforeAll, expect, inject, test } from "vitest";

const FRONTEND_ROOT = resolve(fileURLToPath(new URL(".", import.meta.url)), "..", "..");

const CONTENT_TYPES: Record<string, string> = {
  ".html": "text/html",
  ".js": "text/javascript",
  ".css": "text/css",
  ".map": "application/json",
};

let staticServer: Server;
let pageUrl: string;
let browser: Browser;

beforeAll(async () => {
  // Build dist/ from the current sources so the test can never pass against
  // stale output.
  const build = spawnSync("node", ["node_modules/typescript/bin/tsc", "-p", "tsconfig.build.json"], {
    cwd: FRONTEND_ROOT,
    encoding: "utf8",
  });
  if (build.status !== 0) {
    throw new Error(`tsc build failed:\n${build.stdout}\n${build.stderr}`);
  }

  // The checked-in page points at the documented default port; the test
  // service listens on a random port, so rewrite the meta tag when serving.
  const serviceUrl = inject("serviceUrl");
  const rawHtml = readFileSync(join(FRONTEND_ROOT, "index.html"), "utf8");
  const html = rawHtml.replace(
    /(<meta name="ontosearch-api-base" content=")[^"]*(")/,
    `$1${serviceUrl}$2`,
  );
  if (html === rawHtml) {
    throw new Error("index.html is missing the ontosearch-api-base meta tag");
  }

  staticServer = createServer((req, res) => {
    const path = (req.url ?? "/").split("?")[0];
    if (path === "/" || path === "/index.html") {
      res.writeHead(200, { "content-type": "text/html" });
      res.end(html);
      return;
    }
    try {
      const body = readFileSync(join(FRONTEND_ROOT, path ?? ""));
      res.writeHead(200, { "content-type": CONTENT_TYPES[extname(path ?? "")] ?? "text/plain" });
      res.end(body);
    } catch {
      res.writeHead(404);
      res.end("not found");
    }
  });
  await new Promise<void>((done) => staticServer.listen(0, "127.0.0.1", done));
  const address = staticServer.address();
  if (address === null || typeof address === "string") {
    throw new Error("static server did not bind a port");
  }
  pageUrl = `http://127.0.0.1:${address.port}/`;

  browser = new Browser({
    settings: {
      enableJavaScriptEvaluation: true,
      suppressInsecureJavaScriptEnvironmentWarning: true,
      disableCSSFileLoading: true,
    },
  });
});

afterAll(async () => {
  await browser?.close();
  staticServer?.close();
});

type Page = ReturnType<Browser["newPage"]>;

async function openPage(): Promise<Page> {
  const page = browser.newPage();
  await page.goto(pageUrl);
  await page.waitUntilComplete();
  return page;
}

/** Lets in-flight requests settle before tearing the page down. */
async function closePage(page: Page): Promise<void> {
  await page.waitUntilComplete();
  await page.close();
}

/** Polls until `check` returns a truthy value; fails with the page's console log. */
async function waitFor<T>(page: Page, check: () => T, what: string): Promise<NonNullable<T>> {
  const deadline = Date.now() + 10_000;
  for (;;) {
    const value = check();
    if (value) {
      return value;
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}\npage console:\n${page.virtualConsolePrinter.readAsString()}`);
    }
    await new Promise((tick) => setTimeout(tick, 25));
  }
}

function columnDocs(page: Page, slot: string): number[] {
  const column = page.mainFrame.document.querySelector(`[data-slot="${slot}"]`);
  if (!column) {
    return [];
  }
  return [...column.querySelectorAll("[data-doc]")].map((item) =>
    Number(item.getAttribute("data-doc")),
  );
}

function columnScores(page: Page, slot: string): string[] {
  const column = page.mainFrame.document.querySelector(`[data-slot="${slot}"]`);
  if (!column) {
    return [];
  }
  return [...column.querySelectorAll(".score")].map((span) => span.textContent ?? "");
}

async function submitQuery(page: Page, query: string): Promise<void> {
  const doc = page.mainFrame.document;
  const input = await waitFor(page, () => doc.querySelector('[data-slot="input"]'), "search input");
  (input as unknown as { value: string }).value = query;
  const form = doc.querySelector('[data-slot="form"]');
  const win = page.mainFrame.window;
  form?.dispatchEvent(new win.Event("submit", { bubbles: true, cancelable: true }));
}

test("page boot: served page renders the workbench and corpus summary", async () => {
  const page = await openPage();
  const doc = page.mainFrame.document;

  await waitFor(
    page,
    () => doc.querySelector('[data-slot="meta"]')?.textContent?.includes("10 documents"),
    "corpus summary line",
  );
  expect(doc.querySelector('[data-slot="input"]')).not.toBeNull();
  expect(doc.querySelector('[data-slot="error"]')?.textContent?.trim()).toBeFalsy();
  await closePage(page);
});

test("page session: query, concept selection, and expansion beyond the baseline", async () => {
  const page = await openPage();
  const doc = page.mainFrame.document;

  await submitQuery(page, "cancer");
  await waitFor(page, () => columnDocs(page, "keyword").length > 0, "keyword results");
  expect(columnDocs(page, "keyword")).toEqual([0, 6, 9]);

  // At least one concept candidate is offered.
  await waitFor(page, () => doc.querySelector('[data-concept="breast_cancer"]'), "concept candidate card");

  // Each selection re-renders the candidate panels, so re-query the card to
  // click after every render — exactly as a user re-locates it on screen.
  const senseCard = await waitFor(
    page,
    () => doc.querySelector('[data-sense="cancer.disease"]'),
    "sense candidate card",
  );
  (senseCard as unknown as { click(): void }).click();
  await waitFor(
    page,
    () => doc.querySelector('[data-sense="cancer.disease"]')?.getAttribute("aria-pressed") === "true",
    "sense selection to register",
  );
  const conceptCard = await waitFor(
    page,
    () => doc.querySelector('[data-concept="breast_cancer"]'),
    "concept candidate card after sense selection",
  );
  (conceptCard as unknown as { click(): void }).click();
  await waitFor(
    page,
    () =>
      doc.querySelector('[data-concept="breast_cancer"]')?.getAttribute("aria-pressed") === "true" &&
      columnDocs(page, "expanded").length === 8,
    "expanded results for the sense + concept selection",
  );

  expect(columnDocs(page, "expanded")).toEqual([3, 1, 4, 0, 2, 5, 6, 9]);
  const baseline = new Set(columnDocs(page, "keyword"));
  const beyondBaseline = columnDocs(page, "expanded").filter((id) => !baseline.has(id));
  expect(beyondBaseline.length).toBeGreaterThan(0);
  expect(beyondBaseline).toContain(3);
  await closePage(page);
});

test("page session: declining expansion renders identical lists", async () => {
  const page = await openPage();
  const doc = page.mainFrame.document;

  await submitQuery(page, "cancer");
  const noexp = await waitFor(page, () => doc.querySelector('[data-slot="noexp"]'), "no-expansion button");
  (noexp as unknown as { click(): void }).click();
  await waitFor(page, () => columnDocs(page, "expanded").length > 0, "expanded results");

  expect(columnDocs(page, "expanded")).toEqual(columnDocs(page, "keyword"));
  expect(columnDocs(page, "expanded")).toEqual([0, 6, 9]);
  expect(columnScores(page, "expanded")).toEqual(columnScores(page, "keyword"));
  await closePage(page);
});

/** Browser bootstrap: wire the controller to the real window. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";

/**
 * The service origin comes from (first match wins):
 *   1. <meta name="ontosearch-api-base" content="http://host:port">
 *   2. a global `ONTOSEARCH_API_BASE` string
 *   3. "" — same origin as the page.
 */
export function resolveApiBase(doc: Document): string {
  const meta = doc.querySelector('meta[name="ontosearch-api-base"]');
  const fromMeta = meta?.getAttribute("content")?.trim();
  if (fromMeta) return fromMeta;
  const fromGlobal = (globalThis as Record<string, unknown>)["ONTOSEARCH_API_BASE"];
  if (typeof fromGlobal === "string" && fromGlobal) return fromGlobal;
  return "";
}

function boot(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const app = new App({
    root,
    api: new ApiClient(resolveApiBase(document)),
    navigate: (url, replace) => {
      const target = url || window.location.pathname;
      if (replace) window.history.replaceState(null, "", target);
      else window.history.pushState(null, "", target);
    },
    currentSearch: () => window.location.search,
  });
  window.addEventListener("popstate", () => {
    void app.handleLocationChange();
  });
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}

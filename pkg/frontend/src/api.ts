import type { CandidatesResponse, MetaResponse, SearchResponse } from "./types.js";

/**
 * Minimal structural view of fetch so the client works with the browser
 * fetch, happy-dom's fetch, and Node's fetch without caring which.
 */
export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}>;

/** A service response the UI must surface rather than crash on. */
export class ApiError extends Error {
  /** HTTP status; 0 means the request never reached the service. */
  readonly status: number;
  /** Human-readable message from the service's `detail` field. */
  readonly detail: string;

  constructor(status: number, detail: string) {
    super(status === 0 ? detail : `HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

export interface SearchParams {
  q: string;
  mode: "keyword" | "expanded";
  sense?: string | null;
  concept?: string | null;
  n?: number;
}

/** Typed wrapper over the three GET endpoints of the ontosearch service. */
export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  /**
   * @param base Service origin such as "http://127.0.0.1:7878", or "" for
   *   same-origin relative requests.
   * @param fetchFn Injectable fetch; defaults to the global one.
   */
  constructor(base: string, fetchFn?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url) => fetch(url));
  }

  candidates(q: string): Promise<CandidatesResponse> {
    return this.get<CandidatesResponse>("/api/candidates", { q });
  }

  search(params: SearchParams): Promise<SearchResponse> {
    const query: Record<string, string> = { q: params.q, mode: params.mode };
    if (params.sense) query["sense"] = params.sense;
    if (params.concept) query["concept"] = params.concept;
    if (params.n !== undefined) query["n"] = String(params.n);
    return this.get<SearchResponse>("/api/search", query);
  }

  meta(): Promise<MetaResponse> {
    return this.get<MetaResponse>("/api/meta", {});
  }

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const url = this.base + path + (qs ? `?${qs}` : "");
    let response;
    try {
      response = await this.fetchFn(url);
    } catch (err) {
      throw new ApiError(0, `cannot reach service: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await extractDetail(response));
    }
    return (await response.json()) as T;
  }
}

async function extractDetail(response: {
  status: number;
  text(): Promise<string>;
}): Promise<string> {
  const body = await response.text().catch(() => "");
  try {
    const parsed = JSON.parse(body) as { detail?: unknown };
    if (typeof parsed.detail === "string") return parsed.detail;
  } catch {
    // not JSON — fall through to the raw body
  }
  return body || `status ${response.status}`;
}

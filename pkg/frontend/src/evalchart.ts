/**
 * Parse the evaluation report TSV produced by `ontosearch eval` and render
 * it as a plain-CSS bar chart of the 10-point interpolated
 * precision/recall curves (keyword baseline vs expanded arm).
 */

import { escapeHtml } from "./render.js";

export interface EvalReport {
  /** Recall levels in file order (normally 0.1 … 1.0). */
  levels: number[];
  baseline: number[];
  expanded: number[];
  /** Per-level deltas; empty when the pasted report omits them. */
  delta: number[];
  /** Mean delta from the summary line, or null when absent. */
  meanDelta: number | null;
}

const HEADER = "arm\trecall\tinterpolated_precision";
const ARMS = ["baseline", "expanded", "delta"] as const;

/**
 * @throws Error mentioning the 1-based line number of the first problem.
 */
export function parseEvalTsv(text: string): EvalReport {
  const lines = text.split(/\r?\n/);
  const series: Record<(typeof ARMS)[number], { recall: number; value: number }[]> = {
    baseline: [],
    expanded: [],
    delta: [],
  };
  let meanDelta: number | null = null;
  let sawHeader = false;

  lines.forEach((raw, index) => {
    const lineNo = index + 1;
    const line = raw.trim();
    if (!line) return;
    if (!sawHeader) {
      if (raw.replace(/\r$/, "") !== HEADER) {
        throw new Error(`line ${lineNo}: expected header "${HEADER.replace(/\t/g, " / ")}"`);
      }
      sawHeader = true;
      return;
    }
    const fields = raw.replace(/\r$/, "").split("\t");
    if (fields.length !== 3) {
      throw new Error(`line ${lineNo}: expected 3 tab-separated fields, got ${fields.length}`);
    }
    const [arm, middle, last] = fields as [string, string, string];
    if (arm === "summary") {
      if (middle !== "mean_delta") {
        throw new Error(`line ${lineNo}: unknown summary row "${middle}"`);
      }
      meanDelta = parseNumber(last, lineNo);
      return;
    }
    if (!(ARMS as readonly string[]).includes(arm)) {
      throw new Error(`line ${lineNo}: unknown arm "${arm}"`);
    }
    series[arm as (typeof ARMS)[number]].push({
      recall: parseNumber(middle, lineNo),
      value: parseNumber(last, lineNo),
    });
  });

  if (!sawHeader) throw new Error("line 1: empty report");
  if (series.baseline.length === 0 || series.expanded.length === 0) {
    throw new Error("report has no baseline/expanded rows");
  }
  if (series.baseline.length !== series.expanded.length) {
    throw new Error(
      `baseline has ${series.baseline.length} rows but expanded has ${series.expanded.length}`
    );
  }
  return {
    levels: series.baseline.map((r) => r.recall),
    baseline: series.baseline.map((r) => r.value),
    expanded: series.expanded.map((r) => r.value),
    delta: series.delta.map((r) => r.value),
    meanDelta,
  };
}

function parseNumber(text: string, lineNo: number): number {
  const value = Number(text);
  if (text.trim() === "" || Number.isNaN(value)) {
    throw new Error(`line ${lineNo}: "${text}" is not a number`);
  }
  return value;
}

function barWidth(value: number): number {
  return Math.max(0, Math.min(100, value * 100));
}

export function renderEvalChart(report: EvalReport): string {
  const rows = report.levels
    .map((level, i) => {
      const baseline = report.baseline[i] ?? 0;
      const expanded = report.expanded[i] ?? 0;
      const delta = report.delta[i];
      const deltaText =
        delta === undefined
          ? ""
          : `<span class="delta${delta < 0 ? " negative" : ""}">${
              delta >= 0 ? "+" : ""
            }${escapeHtml(delta.toFixed(6))}</span>`;
      return (
        `<div class="chart-row">` +
        `<span class="level">${escapeHtml(level.toFixed(1))}</span>` +
        `<div class="bars">` +
        `<div class="bar baseline" style="width: ${barWidth(baseline)}%">` +
        `<span>${escapeHtml(baseline.toFixed(6))}</span></div>` +
        `<div class="bar expanded" style="width: ${barWidth(expanded)}%">` +
        `<span>${escapeHtml(expanded.toFixed(6))}</span></div>` +
        `</div>` +
        deltaText +
        `</div>`
      );
    })
    .join("");
  const legend =
    `<div class="chart-legend"><span class="swatch baseline"></span>keyword baseline` +
    `<span class="swatch expanded"></span>expanded</div>`;
  const summary =
    report.meanDelta === null
      ? ""
      : `<p class="chart-summary">mean delta ${report.meanDelta >= 0 ? "+" : ""}${escapeHtml(
          report.meanDelta.toFixed(6)
        )}</p>`;
  return `${legend}<div class="chart">${rows}</div>${summary}`;
}

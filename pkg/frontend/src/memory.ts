import { Table } from "./csv.js";
import { numericResult } from "./schema.js";
import { logScale } from "./scale.js";
import { el, polyline, svgDocument, text, round } from "./svg.js";
import { DEFAULT_FRAME, drawAxes, drawTitle, plotArea } from "./chart.js";

/**
 * Storage inefficiency 1 - r_f against the switch time tau * Gamma_1D on
 * log-log axes: the numeric curve with markers, the small-loss expansion
 * as a dashed line, and the small-tau plateau (read from the sidecar) as
 * a dashed horizontal asymptote with its value annotated.
 */
export function renderMemory(data: Table, title?: string): string {
  const frame = DEFAULT_FRAME;
  const { x0, x1, y0, y1 } = plotArea(frame);
  const plateau = numericResult(data.sidecar, "plateau", "memory sidecar");

  const taus = data.rows.map((r) => r.tau_Gamma1D);
  const numeric = data.rows.map((r) => r.one_minus_rf_numeric);
  const approx = data.rows.map((r) => r.one_minus_rf_approx);
  const all = [...numeric, ...approx, plateau];
  const xScale = logScale([Math.min(...taus), Math.max(...taus)], [x0, x1]);
  const yScale = logScale([Math.min(...all) / 1.5, Math.max(...all) * 1.5], [y0, y1]);

  const numericLine: [number, number][] = taus.map((t, i) => [xScale.map(t), yScale.map(numeric[i])]);
  const approxLine: [number, number][] = taus.map((t, i) => [xScale.map(t), yScale.map(approx[i])]);
  const markers = taus.map((t, i) =>
    el("circle", { cx: round(xScale.map(t)), cy: round(yScale.map(numeric[i])), r: 3, fill: "steelblue" }),
  );
  const plateauY = round(yScale.map(plateau));

  const cfg = data.sidecar.config;
  const heading = title ?? `storage inefficiency (${cfg.schedule} schedule, T = ${cfg.T})`;
  return svgDocument(frame.width, frame.height, [
    el("line", {
      x1: x0, y1: plateauY, x2: x1, y2: plateauY,
      stroke: "crimson", "stroke-dasharray": "4 4", "stroke-width": 1.5,
    }),
    polyline(approxLine, { stroke: "darkorange", "stroke-dasharray": "8 4", "stroke-width": 1.5 }),
    polyline(numericLine, { stroke: "steelblue", "stroke-width": 2 }),
    ...markers,
    ...drawAxes(frame, xScale, yScale, "tau Gamma_1D", "1 - r_f"),
    drawTitle(frame, heading),
    text(x1 - 8, plateauY - 6, `plateau = ${plateau}`, {
      "text-anchor": "end", "font-size": 13, fill: "crimson",
    }),
    text(x0 + 8, y1 + 20, "dashed: small-loss expansion", {
      "font-size": 13, fill: "darkorange",
    }),
  ]);
}

import { Table } from "./csv.js";
import { numericResult } from "./schema.js";
import { logScale } from "./scale.js";
import { el, polyline, svgDocument, text, round } from "./svg.js";
import { DEFAULT_FRAME, drawAxes, drawTitle, plotArea } from "./chart.js";

/**
 * Log-log plot of the interface inefficiency 1 - r_q against atom number,
 * with the power-law fit from the sidecar drawn through the data and its
 * slope annotated.  No fitting happens here; the exponent is read from
 * results.exponent.
 */
export function renderScaling(data: Table, title?: string): string {
  const frame = DEFAULT_FRAME;
  const { x0, x1, y0, y1 } = plotArea(frame);
  const exponent = numericResult(data.sidecar, "exponent", "scaling sidecar");

  const ns = data.rows.map((r) => r.N);
  const ineff = data.rows.map((r) => r.one_minus_r_q);
  const xScale = logScale([Math.min(...ns) / 1.3, Math.max(...ns) * 1.3], [x0, x1]);
  const yScale = logScale([Math.min(...ineff) / 1.5, Math.max(...ineff) * 1.5], [y0, y1]);

  // anchor the fitted line through the geometric-mean point of the data
  const meanLogN = ns.reduce((s, n) => s + Math.log(n), 0) / ns.length;
  const meanLogI = ineff.reduce((s, v) => s + Math.log(v), 0) / ineff.length;
  const lineAt = (n: number) => Math.exp(meanLogI + exponent * (Math.log(n) - meanLogN));
  const fit: [number, number][] = [];
  for (let i = 0; i <= 40; i++) {
    const n = xScale.domain[0] * Math.pow(xScale.domain[1] / xScale.domain[0], i / 40);
    const v = lineAt(n);
    if (v >= yScale.domain[0] && v <= yScale.domain[1]) {
      fit.push([xScale.map(n), yScale.map(v)]);
    }
  }

  const markers = data.rows.map((r) =>
    el("circle", {
      cx: round(xScale.map(r.N)),
      cy: round(yScale.map(r.one_minus_r_q)),
      r: 4,
      fill: "steelblue",
    }),
  );

  const cfg = data.sidecar.config;
  const heading = title ?? `inefficiency scaling (${cfg.kind}, a = ${cfg.a}, a_z = ${cfg.az})`;
  return svgDocument(frame.width, frame.height, [
    polyline(fit, { stroke: "gray", "stroke-dasharray": "6 4", "stroke-width": 1.5 }),
    ...markers,
    ...drawAxes(frame, xScale, yScale, "atoms per layer N", "1 - r_q"),
    drawTitle(frame, heading),
    text(x1 - 8, y1 + 20, `slope = ${exponent.toFixed(2)}`, {
      "text-anchor": "end",
      "font-size": 14,
      fill: "gray",
    }),
  ]);
}

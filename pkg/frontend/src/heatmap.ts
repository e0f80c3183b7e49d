import { Table } from "./csv.js";
import { linearScale } from "./scale.js";
import { el, polyline, svgDocument, text, round } from "./svg.js";
import { DEFAULT_FRAME, colorRamp, drawAxes, drawTitle, plotArea } from "./chart.js";

/**
 * Efficiency heatmap over the (a_z, a) spacing plane, with optional design
 * overlays: loss-cancelling curves (red lines) and discrete cancellation
 * sets (red circles).  NaN cells (grazing geometries) are left blank.
 */
export function renderHeatmap(map: Table, curves: Table[], sets: Table | null, title?: string): string {
  const frame = { ...DEFAULT_FRAME, width: 720, margin: { ...DEFAULT_FRAME.margin, right: 96 } };
  const { x0, x1, y0, y1 } = plotArea(frame);

  const azValues = [...new Set(map.rows.map((r) => r.az))].sort((a, b) => a - b);
  const aValues = [...new Set(map.rows.map((r) => r.a))].sort((a, b) => a - b);
  if (azValues.length < 2 || aValues.length < 2) {
    throw new Error("heatmap needs a 2D grid of (az, a) samples");
  }
  const dAz = azValues[1] - azValues[0];
  const dA = aValues[1] - aValues[0];
  const xScale = linearScale([azValues[0] - dAz / 2, azValues[azValues.length - 1] + dAz / 2], [x0, x1]);
  const yScale = linearScale([aValues[0] - dA / 2, aValues[aValues.length - 1] + dA / 2], [y0, y1]);

  const cells: string[] = [];
  const cellW = Math.abs(xScale.map(dAz) - xScale.map(0));
  const cellH = Math.abs(yScale.map(dA) - yScale.map(0));
  for (const row of map.rows) {
    if (!Number.isFinite(row.r_q)) continue;
    cells.push(
      el("rect", {
        x: round(xScale.map(row.az - dAz / 2)),
        y: round(yScale.map(row.a + dA / 2)),
        width: round(cellW + 0.5),
        height: round(cellH + 0.5),
        fill: colorRamp(row.r_q),
      }),
    );
  }

  const overlays: string[] = [];
  for (const curve of curves) {
    // curves run off to large a near their domain edge; break the polyline
    // wherever a point leaves the plotted window
    let segment: [number, number][] = [];
    const flush = () => {
      if (segment.length > 1) {
        overlays.push(polyline(segment, { stroke: "red", "stroke-width": 2 }));
      }
      segment = [];
    };
    for (const row of curve.rows) {
      const inside =
        row.az >= xScale.domain[0] && row.az <= xScale.domain[1] &&
        row.a >= yScale.domain[0] && row.a <= yScale.domain[1];
      if (!inside) {
        flush();
        continue;
      }
      segment.push([xScale.map(row.az), yScale.map(row.a)]);
    }
    flush();
  }
  if (sets) {
    for (const row of sets.rows) {
      overlays.push(
        el("circle", {
          cx: round(xScale.map(row.az)),
          cy: round(yScale.map(row.a)),
          r: 5,
          fill: "none",
          stroke: "red",
          "stroke-width": 2,
        }),
      );
    }
  }

  // colorbar
  const barX = frame.width - 72;
  const barW = 16;
  const bar: string[] = [];
  const steps = 64;
  for (let i = 0; i < steps; i++) {
    const v = i / (steps - 1);
    const yTop = y0 + (y1 - y0) * ((i + 1) / steps);
    bar.push(
      el("rect", {
        x: barX,
        y: round(yTop),
        width: barW,
        height: round((y0 - y1) / steps + 0.5),
        fill: colorRamp(v),
      }),
    );
  }
  for (const v of [0, 0.5, 1]) {
    bar.push(text(barX + barW + 4, round(y0 + (y1 - y0) * v) + 4, v.toString(), { "font-size": 11 }));
  }
  bar.push(text(barX + barW / 2, y1 - 8, "r_q", { "text-anchor": "middle" }));

  const cfg = map.sidecar.config;
  const heading = title ?? `efficiency map (${cfg.kind}, q = ${cfg.q === 0 ? "0" : "pi"})`;
  return svgDocument(frame.width, frame.height, [
    ...cells,
    ...overlays,
    ...drawAxes(frame, xScale, yScale, "a_z / lambda", "a / lambda"),
    ...bar,
    drawTitle(frame, heading),
  ]);
}

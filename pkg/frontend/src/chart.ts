import { Scale, formatTick } from "./scale.js";
import { el, text, round } from "./svg.js";

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 480,
  margin: { top: 44, right: 28, bottom: 56, left: 72 },
};

export function plotArea(frame: Frame) {
  const { width, height, margin } = frame;
  return {
    x0: margin.left,
    x1: width - margin.right,
    y0: height - margin.bottom, // SVG y grows downward; y0 is the axis line
    y1: margin.top,
  };
}

export function drawAxes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
): string[] {
  const { x0, x1, y0, y1 } = plotArea(frame);
  const parts: string[] = [];
  parts.push(el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "black" }));
  parts.push(el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "black" }));
  for (const t of xScale.ticks()) {
    const x = round(xScale.map(t));
    parts.push(el("line", { x1: x, y1: y0, x2: x, y2: y0 + 5, stroke: "black" }));
    parts.push(text(x, y0 + 18, formatTick(t, xScale.kind), { "text-anchor": "middle" }));
  }
  for (const t of yScale.ticks()) {
    const y = round(yScale.map(t));
    parts.push(el("line", { x1: x0 - 5, y1: y, x2: x0, y2: y, stroke: "black" }));
    parts.push(text(x0 - 8, y + 4, formatTick(t, yScale.kind), { "text-anchor": "end" }));
  }
  parts.push(text((x0 + x1) / 2, frame.height - 12, xLabel, { "text-anchor": "middle", "font-size": 14 }));
  parts.push(
    text(18, (y0 + y1) / 2, yLabel, {
      "text-anchor": "middle",
      "font-size": 14,
      transform: `rotate(-90 18 ${round((y0 + y1) / 2)})`,
    }),
  );
  return parts;
}

export function drawTitle(frame: Frame, title: string): string {
  return text(frame.width / 2, 24, title, { "text-anchor": "middle", "font-size": 16 });
}

// coarse viridis ramp; enough stops for a smooth-looking heatmap
const VIRIDIS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

/** Map a value in [0, 1] to a viridis-like CSS color. */
export function colorRamp(v: number): string {
  const clamped = Math.min(Math.max(v, 0), 1);
  const pos = clamped * (VIRIDIS.length - 1);
  const i = Math.min(Math.floor(pos), VIRIDIS.length - 2);
  const f = pos - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const [r0, g0, b0] = VIRIDIS[i];
  const [r1, g1, b1] = VIRIDIS[i + 1];
  return `rgb(${mix(r0, r1)},${mix(g0, g1)},${mix(b0, b1)})`;
}

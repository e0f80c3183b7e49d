/** Linear and log10 axis scales with tick generation. */

export interface Scale {
  map(value: number): number;
  ticks(): number[];
  domain: [number, number];
  range: [number, number];
  kind: "linear" | "log";
}

function niceStep(span: number, targetTicks: number): number {
  const raw = span / targetTicks;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2 * mag;
  if (norm < 7.5) return 5 * mag;
  return 10 * mag;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  return {
    domain,
    range,
    kind: "linear",
    map: (v) => r0 + ((v - d0) / span) * (r1 - r0),
    ticks: () => {
      const step = niceStep(span, 6);
      const ticks: number[] = [];
      for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-9 * span; t += step) {
        ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
      }
      return ticks;
    },
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  return {
    domain,
    range,
    kind: "log",
    map: (v) => r0 + ((Math.log10(v) - l0) / (l1 - l0)) * (r1 - r0),
    ticks: () => {
      const ticks: number[] = [];
      const decades = l1 - l0;
      // sparse domains get 1-2-5 subdivision, wide ones powers of ten only
      const mantissas = decades <= 2.5 ? [1, 2, 5] : [1];
      for (let e = Math.floor(l0); e <= Math.ceil(l1); e++) {
        for (const m of mantissas) {
          const t = m * Math.pow(10, e);
          if (t >= d0 * (1 - 1e-9) && t <= d1 * (1 + 1e-9)) ticks.push(t);
        }
      }
      return ticks;
    },
  };
}

export function formatTick(value: number, kind: "linear" | "log"): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (kind === "log" || abs >= 1e4 || abs < 1e-3) {
    const e = Math.floor(Math.log10(abs) + 1e-9);
    const m = value / Math.pow(10, e);
    if (Math.abs(m - 1) < 1e-9) return `1e${e}`;
    return `${Number(m.toPrecision(3))}e${e}`;
  }
  return String(Number(value.toPrecision(4)));
}

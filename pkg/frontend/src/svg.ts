/** Minimal SVG assembly: escaped attributes, string children. */

export type Attrs = Record<string, string | number>;

function esc(value: string): string {
  return value
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Attrs, children: string | string[] = ""): string {
  const attrText = Object.entries(attrs)
    .map(([k, v]) => `${k}="${esc(String(v))}"`)
    .join(" ");
  const body = Array.isArray(children) ? children.join("") : children;
  if (body === "") return `<${tag} ${attrText}/>`;
  return `<${tag} ${attrText}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el(
    "text",
    { x: round(x), y: round(y), "font-family": "sans-serif", "font-size": 12, ...attrs },
    esc(content),
  );
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    el("rect", { x: 0, y: 0, width, height, fill: "white" }) +
    body.join("") +
    "</svg>"
  );
}

/** Round coordinates to keep the output diff-friendly. */
export function round(v: number): number {
  return Math.round(v * 100) / 100;
}

export function polyline(points: [number, number][], attrs: Attrs): string {
  const pts = points.map(([x, y]) => `${round(x)},${round(y)}`).join(" ");
  return el("polyline", { points: pts, fill: "none", ...attrs });
}

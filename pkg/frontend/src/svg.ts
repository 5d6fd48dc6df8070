/**
 * Minimal deterministic SVG chart primitives.
 *
 * Pure string assembly: same input, same bytes. No timestamps, no randomness,
 * fixed-precision coordinates. A figure is one <svg> document containing one
 * or more panels, each with its own axes, series and legend.
 */

export interface Pt {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  color: string;
  /** stroke-dasharray for the line, e.g. "5,3"; solid when omitted */
  dash?: string;
  /** polyline vertices in data coordinates; empty for marker-only series */
  line: Pt[];
  /** marker positions in data coordinates; empty for line-only series */
  markers: Pt[];
  marker?: "circle" | "square";
}

export interface PanelOpts {
  /** top-left corner of the panel's plot area inside the document */
  x0: number;
  y0: number;
  /** plot-area size (margins for labels live outside these bounds) */
  w: number;
  h: number;
  title: string;
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  series: Series[];
  legend?: "tl" | "tr" | "bl" | "br";
  /** small caption under the legend, e.g. "markers: simulated" */
  note?: string;
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(v));
    if (e >= -2 && e <= 2) return String(Number(v.toPrecision(6)));
    return `1e${e}`;
  }
  return String(Number(v.toPrecision(6)));
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(min) - 1e-9); Math.pow(10, e) <= max * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

interface Scale {
  (v: number): number;
}

function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  const d = hi - lo || 1;
  return (v) => a + ((v - lo) / d) * (b - a);
}

function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const llo = Math.log10(lo);
  const d = Math.log10(hi) - llo || 1;
  return (v) => a + ((Math.log10(v) - llo) / d) * (b - a);
}

function markerGlyph(kind: "circle" | "square", x: number, y: number, color: string): string {
  const cx = x.toFixed(2);
  const cy = y.toFixed(2);
  if (kind === "square") {
    return `<rect x="${(x - 2.4).toFixed(2)}" y="${(y - 2.4).toFixed(2)}" width="4.8" height="4.8" fill="#fff" stroke="${color}" stroke-width="1"/>`;
  }
  return `<circle cx="${cx}" cy="${cy}" r="2.4" fill="${color}"/>`;
}

/** Data extent over every line vertex and marker of every series. */
function extent(series: Series[], pick: (p: Pt) => number, log: boolean): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const p of [...s.line, ...s.markers]) {
      const v = pick(p);
      if (!Number.isFinite(v) || (log && v <= 0)) continue;
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (lo > hi) {
    throw new Error("nothing to plot: no finite data points");
  }
  if (lo === hi) {
    // degenerate span: widen symmetrically so the point sits mid-panel
    return log ? [lo / 10, hi * 10] : [lo - 1, hi + 1];
  }
  return [lo, hi];
}

export function panel(opts: PanelOpts): string {
  const { x0, y0, w, h, series } = opts;
  if (series.length === 0) {
    throw new Error(`panel "${opts.title}": no series`);
  }

  let [xLo, xHi] = extent(series, (p) => p.x, !!opts.xLog);
  let [yLo, yHi] = extent(series, (p) => p.y, !!opts.yLog);
  if (opts.yLog) {
    yLo /= 1.6;
    yHi *= 1.6;
  } else {
    const pad = 0.06 * (yHi - yLo);
    yLo -= pad;
    yHi += pad;
  }

  const sx = opts.xLog ? logScale(xLo, xHi, x0, x0 + w) : linearScale(xLo, xHi, x0, x0 + w);
  const sy = opts.yLog ? logScale(yLo, yHi, y0 + h, y0) : linearScale(yLo, yHi, y0 + h, y0);
  const xTicks = opts.xLog ? decadeTicks(xLo, xHi) : niceTicks(xLo, xHi, 6);
  const yTicks = opts.yLog ? decadeTicks(yLo, yHi) : niceTicks(yLo, yHi, 6);

  let s = `<text x="${(x0 + w / 2).toFixed(2)}" y="${(y0 - 8).toFixed(2)}" text-anchor="middle" font-size="11" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;

  for (const v of yTicks) {
    const y = sy(v).toFixed(2);
    s += `<line x1="${x0}" y1="${y}" x2="${x0 + w}" y2="${y}" stroke="#e8e8e8" stroke-width="0.6"/>\n`;
  }
  for (const v of xTicks) {
    const x = sx(v).toFixed(2);
    s += `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y0 + h}" stroke="#f2f2f2" stroke-width="0.6"/>\n`;
  }

  for (const sr of series) {
    const visible = sr.line.filter(
      (p) => Number.isFinite(p.x) && Number.isFinite(p.y) && (!opts.yLog || p.y > 0) && (!opts.xLog || p.x > 0)
    );
    if (visible.length > 1) {
      const pts = visible.map((p) => `${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`).join(" ");
      const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
      s += `<polyline fill="none" stroke="${sr.color}" stroke-width="1.3"${dash} points="${pts}"/>\n`;
    }
    for (const p of sr.markers) {
      if (!Number.isFinite(p.x) || !Number.isFinite(p.y)) continue;
      if ((opts.yLog && p.y <= 0) || (opts.xLog && p.x <= 0)) continue;
      s += markerGlyph(sr.marker ?? "circle", sx(p.x), sy(p.y), sr.color) + "\n";
    }
  }

  s += `<rect x="${x0}" y="${y0}" width="${w}" height="${h}" fill="none" stroke="#333" stroke-width="0.8"/>\n`;
  for (const v of xTicks) {
    const x = sx(v).toFixed(2);
    s += `<line x1="${x}" y1="${y0 + h}" x2="${x}" y2="${y0 + h + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x}" y="${y0 + h + 14}" text-anchor="middle" font-size="8" fill="#555">${esc(fmtTick(v, !!opts.xLog))}</text>\n`;
  }
  for (const v of yTicks) {
    const y = sy(v);
    s += `<line x1="${x0 - 4}" y1="${y.toFixed(2)}" x2="${x0}" y2="${y.toFixed(2)}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x0 - 6}" y="${(y + 2.6).toFixed(2)}" text-anchor="end" font-size="8" fill="#555">${esc(fmtTick(v, !!opts.yLog))}</text>\n`;
  }
  s += `<text x="${(x0 + w / 2).toFixed(2)}" y="${(y0 + h + 28).toFixed(2)}" text-anchor="middle" font-size="9" fill="#333">${esc(opts.xLabel)}</text>\n`;
  s += `<text x="${(x0 - 38).toFixed(2)}" y="${(y0 + h / 2).toFixed(2)}" text-anchor="middle" font-size="9" fill="#333" transform="rotate(-90,${(x0 - 38).toFixed(2)},${(y0 + h / 2).toFixed(2)})">${esc(opts.yLabel)}</text>\n`;

  const corner = opts.legend ?? "tr";
  const entryH = 11;
  const noteLines = opts.note ? 1 : 0;
  const boxW = Math.max(...series.map((sr) => sr.label.length), opts.note?.length ?? 0) * 4.6 + 30;
  const boxH = (series.length + noteLines) * entryH + 6;
  const lx = corner.endsWith("l") ? x0 + 8 : x0 + w - boxW - 8;
  const ly = corner.startsWith("t") ? y0 + 8 : y0 + h - boxH - 8;
  s += `<rect x="${lx.toFixed(2)}" y="${ly.toFixed(2)}" width="${boxW.toFixed(2)}" height="${boxH.toFixed(2)}" rx="2" fill="#fff" fill-opacity="0.88" stroke="#ccc" stroke-width="0.5"/>\n`;
  series.forEach((sr, i) => {
    const yy = ly + 9 + i * entryH;
    const dash = sr.dash ? ` stroke-dasharray="${sr.dash}"` : "";
    if (sr.line.length > 1) {
      s += `<line x1="${(lx + 5).toFixed(2)}" y1="${yy.toFixed(2)}" x2="${(lx + 19).toFixed(2)}" y2="${yy.toFixed(2)}" stroke="${sr.color}" stroke-width="1.3"${dash}/>\n`;
    }
    if (sr.markers.length > 0) {
      s += markerGlyph(sr.marker ?? "circle", lx + 12, yy, sr.color) + "\n";
    }
    s += `<text x="${(lx + 23).toFixed(2)}" y="${(yy + 2.6).toFixed(2)}" font-size="8" fill="#444">${esc(sr.label)}</text>\n`;
  });
  if (opts.note) {
    const yy = ly + 9 + series.length * entryH;
    s += `<text x="${(lx + 5).toFixed(2)}" y="${(yy + 2.6).toFixed(2)}" font-size="7.5" fill="#888">${esc(opts.note)}</text>\n`;
  }
  return s;
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#fff"/>\n` +
    body +
    `</svg>\n`
  );
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

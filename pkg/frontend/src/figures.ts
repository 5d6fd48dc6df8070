/**
 * Figure builders: one function per result-file kind.
 *
 * Each builder takes parsed CSV rows and returns a complete SVG document.
 * Builders are pure and deterministic; series are ordered by sorted group
 * value so reruns produce identical bytes.
 */
import { ColumnSpec, Row } from "./csv.js";
import { PALETTE, Pt, Series, panel, svgDocument } from "./svg.js";

export type FigureKind = "sindr" | "rmse" | "ber";

export const FIGURE_COLUMNS: Record<FigureKind, ColumnSpec[]> = {
  sindr: [
    { name: "dtau", kind: "number" },
    { name: "deps", kind: "number" },
    { name: "analytical_sindr_db", kind: "number" },
    { name: "simulated_sindr_db", kind: "number" },
    { name: "dac_mode", kind: "string" },
  ],
  rmse: [
    { name: "snr_db", kind: "number" },
    { name: "dac_mode", kind: "string" },
    { name: "sto_rmse_samples", kind: "number" },
    { name: "cfo_rmse", kind: "number" },
  ],
  ber: [
    { name: "snr_db", kind: "number" },
    { name: "dac_mode", kind: "string" },
    { name: "sync_mode", kind: "string" },
    { name: "ber", kind: "number" },
  ],
};

const MODES = ["one_bit", "infinite"] as const;
const MODE_LABEL: Record<string, string> = { one_bit: "1-bit", infinite: "inf-res" };

function num(r: Row, key: string): number {
  return r[key] as number;
}

function sortedUnique(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

/**
 * Values of `groupKey` that are swept along `sweepKey`, i.e. appear with at
 * least `minPoints` distinct sweep positions. Separates the two interleaved
 * sub-grids (timing sweep vs CFO sweep) in a residual-offset result file.
 */
function sweptGroups(rows: Row[], groupKey: string, sweepKey: string, minPoints: number): number[] {
  const seen = new Map<number, Set<number>>();
  for (const r of rows) {
    const g = num(r, groupKey);
    if (!seen.has(g)) seen.set(g, new Set());
    seen.get(g)!.add(num(r, sweepKey));
  }
  return sortedUnique([...seen.keys()].filter((g) => seen.get(g)!.size >= minPoints));
}

function offsetSeries(
  rows: Row[],
  groupKey: string,
  sweepKey: string,
  groups: number[],
  groupLabel: (g: number) => string
): Series[] {
  const series: Series[] = [];
  groups.forEach((g, gi) => {
    for (const mode of MODES) {
      const sel = rows
        .filter((r) => num(r, groupKey) === g && r.dac_mode === mode)
        .sort((a, b) => num(a, sweepKey) - num(b, sweepKey));
      if (sel.length === 0) continue;
      const line: Pt[] = sel.map((r) => ({ x: num(r, sweepKey), y: num(r, "analytical_sindr_db") }));
      const markers: Pt[] = sel.map((r) => ({ x: num(r, sweepKey), y: num(r, "simulated_sindr_db") }));
      series.push({
        label: `${groupLabel(g)}, ${MODE_LABEL[mode]}`,
        color: PALETTE[gi % PALETTE.length]!,
        dash: mode === "infinite" ? "5,3" : undefined,
        marker: mode === "infinite" ? "square" : "circle",
        line,
        markers,
      });
    }
  });
  return series;
}

export function sindrFigure(rows: Row[]): string {
  const depsGroups = sweptGroups(rows, "deps", "dtau", 5);
  const dtauGroups = sweptGroups(rows, "dtau", "deps", 5);
  if (depsGroups.length === 0) {
    throw new Error("no timing sweep found: no CFO value covers 5+ timing offsets");
  }
  if (dtauGroups.length === 0) {
    throw new Error("no CFO sweep found: no timing offset covers 5+ CFO values");
  }
  const left = panel({
    x0: 62,
    y0: 42,
    w: 340,
    h: 230,
    title: "SINDR vs residual timing offset",
    xLabel: "Δτ (samples)",
    yLabel: "SINDR (dB)",
    series: offsetSeries(rows, "deps", "dtau", depsGroups, (g) => `Δε=${g}`),
    legend: "bl",
    note: "lines: closed form · markers: simulated",
  });
  const right = panel({
    x0: 496,
    y0: 42,
    w: 340,
    h: 230,
    title: "SINDR vs residual CFO",
    xLabel: "Δε (fraction of subcarrier spacing)",
    xLog: true,
    yLabel: "SINDR (dB)",
    series: offsetSeries(rows, "dtau", "deps", dtauGroups, (g) => `Δτ=${g}`),
    legend: "bl",
    note: "lines: closed form · markers: simulated",
  });
  return svgDocument(880, 322, left + right);
}

export function rmseFigure(rows: Row[]): string {
  const make = (valueKey: string): Series[] =>
    MODES.map((mode, mi) => {
      const sel = rows
        .filter((r) => r.dac_mode === mode)
        .sort((a, b) => num(a, "snr_db") - num(b, "snr_db"));
      const pts: Pt[] = sel.map((r) => ({ x: num(r, "snr_db"), y: num(r, valueKey) }));
      return {
        label: MODE_LABEL[mode]!,
        color: PALETTE[mi]!,
        dash: mode === "infinite" ? "5,3" : undefined,
        marker: mode === "infinite" ? ("square" as const) : ("circle" as const),
        line: pts,
        markers: pts,
      };
    }).filter((s) => s.line.length > 0);
  const left = panel({
    x0: 62,
    y0: 42,
    w: 340,
    h: 230,
    title: "Timing estimation RMSE",
    xLabel: "SNR (dB)",
    yLabel: "RMSE (samples)",
    yLog: true,
    series: make("sto_rmse_samples"),
  });
  const right = panel({
    x0: 496,
    y0: 42,
    w: 340,
    h: 230,
    title: "Carrier-frequency-offset estimation RMSE",
    xLabel: "SNR (dB)",
    yLabel: "RMSE (subcarrier spacings)",
    yLog: true,
    series: make("cfo_rmse"),
  });
  return svgDocument(880, 322, left + right);
}

export function berFigure(rows: Row[]): string {
  const syncs = [
    { key: "perfect", label: "known offsets", dash: undefined },
    { key: "schmidl_cox", label: "estimated offsets", dash: "5,3" },
  ];
  const series: Series[] = [];
  MODES.forEach((mode, mi) => {
    for (const sync of syncs) {
      const sel = rows
        .filter((r) => r.dac_mode === mode && r.sync_mode === sync.key)
        .sort((a, b) => num(a, "snr_db") - num(b, "snr_db"));
      if (sel.length === 0) continue;
      // zero error counts cannot sit on a log axis; end the curve instead
      const pts: Pt[] = sel
        .filter((r) => num(r, "ber") > 0)
        .map((r) => ({ x: num(r, "snr_db"), y: num(r, "ber") }));
      series.push({
        label: `${MODE_LABEL[mode]}, ${sync.label}`,
        color: PALETTE[mi]!,
        dash: sync.dash,
        marker: sync.key === "schmidl_cox" ? "square" : "circle",
        line: pts,
        markers: pts,
      });
    }
  });
  const body = panel({
    x0: 70,
    y0: 42,
    w: 360,
    h: 250,
    title: "Uncoded bit error rate",
    xLabel: "SNR (dB)",
    yLabel: "BER",
    yLog: true,
    series,
    legend: "bl",
  });
  return svgDocument(470, 342, body);
}

export const FIGURE_BUILDERS: Record<FigureKind, (rows: Row[]) => string> = {
  sindr: sindrFigure,
  rmse: rmseFigure,
  ber: berFigure,
};

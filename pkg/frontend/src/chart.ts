/**
 * SVG step chart: cumulative items inspected vs defects found, with the
 * accept / continue / reject regions taken verbatim from the server's
 * boundary snapshot (no client-side recomputation).
 */

import { BoundaryRow } from "./api.js";
import { PathPoint } from "./session.js";

export interface ChartGeometry {
  width: number;
  height: number;
  margin: number;
}

const DEFAULT_GEOMETRY: ChartGeometry = { width: 720, height: 420, margin: 40 };

interface Scale {
  x(m: number): number;
  y(d: number): number;
  dMax: number;
}

function makeScale(nT: number, dMax: number, g: ChartGeometry): Scale {
  const innerW = g.width - 2 * g.margin;
  const innerH = g.height - 2 * g.margin;
  return {
    x: (m) => g.margin + (m / nT) * innerW,
    y: (d) => g.height - g.margin - (d / dMax) * innerH,
    dMax,
  };
}

function polyline(points: Array<[number, number]>): string {
  return points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" ");
}

/** Regions as SVG polygon point strings; exported for testing. */
export function regionPolygons(
  boundaries: BoundaryRow[],
  nT: number,
  dMax: number,
  g: ChartGeometry = DEFAULT_GEOMETRY,
): { accept: string; reject: string } {
  const s = makeScale(nT, dMax, g);
  const acceptTop: Array<[number, number]> = [];
  const rejectBottom: Array<[number, number]> = [];
  for (const row of boundaries) {
    // accept region: d <= accept_max_d; draw its ceiling at a(m) + 1/2
    const aTop = row.accept_max_d >= 0 ? Math.min(row.accept_max_d + 0.5, dMax) : -1;
    if (aTop >= 0) acceptTop.push([s.x(row.m), s.y(aTop)]);
    // reject region: d >= reject_min_d; draw its floor at r(m) - 1/2
    const rBot = Math.min(row.reject_min_d - 0.5, dMax);
    rejectBottom.push([s.x(row.m), s.y(Math.max(rBot, 0))]);
  }
  const accept =
    acceptTop.length === 0
      ? ""
      : polyline([
          [acceptTop[0][0], s.y(0)],
          ...acceptTop,
          [acceptTop[acceptTop.length - 1][0], s.y(0)],
        ]);
  const reject = polyline([
    [rejectBottom[0][0], s.y(dMax)],
    ...rejectBottom,
    [rejectBottom[rejectBottom.length - 1][0], s.y(dMax)],
  ]);
  return { accept, reject };
}

/** Step-path polyline for the inspected trajectory; exported for testing. */
export function pathPolyline(
  path: PathPoint[],
  nT: number,
  dMax: number,
  g: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  const s = makeScale(nT, dMax, g);
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < path.length; i++) {
    const { m, d } = path[i];
    if (i > 0) pts.push([s.x(m), s.y(path[i - 1].d)]); // horizontal step
    pts.push([s.x(m), s.y(d)]);
  }
  return polyline(pts);
}

export function defectAxisMax(boundaries: BoundaryRow[], path: PathPoint[]): number {
  let dMax = 5;
  for (const row of boundaries) {
    if (row.reject_min_d < 1 << 29) dMax = Math.max(dMax, row.reject_min_d + 2);
  }
  for (const p of path) dMax = Math.max(dMax, p.d + 2);
  return dMax;
}

export function renderChart(
  container: HTMLElement,
  boundaries: BoundaryRow[],
  path: PathPoint[],
  nT: number,
  g: ChartGeometry = DEFAULT_GEOMETRY,
): void {
  if (boundaries.length === 0) {
    container.innerHTML = `<p class="hint">no boundary geometry available</p>`;
    return;
  }
  const dMax = defectAxisMax(boundaries, path);
  const { accept, reject } = regionPolygons(boundaries, nT, dMax, g);
  const line = pathPolyline(path, nT, dMax, g);
  const s = makeScale(nT, dMax, g);
  const last = path[path.length - 1];
  const ticksX = [0, Math.round(nT / 2), nT];
  const ticksY = [0, Math.round(dMax / 2), dMax];
  container.innerHTML = `
<svg viewBox="0 0 ${g.width} ${g.height}" class="chart" role="img"
     aria-label="inspection path against accept and reject regions">
  <rect x="0" y="0" width="${g.width}" height="${g.height}" class="chart-bg"/>
  ${reject ? `<polygon class="region-reject" points="${reject}"/>` : ""}
  ${accept ? `<polygon class="region-accept" points="${accept}"/>` : ""}
  <polyline class="path-line" fill="none" points="${line}"/>
  <circle class="path-head" cx="${s.x(last.m).toFixed(1)}" cy="${s
    .y(last.d)
    .toFixed(1)}" r="5"/>
  <g class="axes">
    ${ticksX
      .map(
        (t) =>
          `<text x="${s.x(t).toFixed(1)}" y="${g.height - 12}" text-anchor="middle">${t}</text>`,
      )
      .join("")}
    ${ticksY
      .map(
        (t) =>
          `<text x="${g.margin - 8}" y="${(s.y(t) + 4).toFixed(1)}" text-anchor="end">${t}</text>`,
      )
      .join("")}
    <text x="${g.width / 2}" y="${g.height - 2}" text-anchor="middle" class="axis-label">items inspected</text>
    <text x="12" y="${g.height / 2}" text-anchor="middle" class="axis-label"
          transform="rotate(-90 12 ${g.height / 2})">defects found</text>
  </g>
</svg>`;
}

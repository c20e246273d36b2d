/** Local hit-testing over geometry JSON.
 *
 * This mirror exists only for immediate hover feedback; every highlight set
 * the UI actually applies comes from the server. Priority matches the
 * engine: option anchors, then the deepest branch box, then the nearest
 * polyline (ties to the lowest id), then the axis line.
 */

import type { AxisGeom, Geometry, HitTarget } from "./types.js";

function segmentDistance(
  px: number, py: number, ax: number, ay: number, bx: number, by: number,
): number {
  const vx = bx - ax;
  const vy = by - ay;
  const lengthSq = vx * vx + vy * vy;
  if (lengthSq === 0) return Math.hypot(px - ax, py - ay);
  let t = ((px - ax) * vx + (py - ay) * vy) / lengthSq;
  t = Math.max(0, Math.min(1, t));
  return Math.hypot(px - (ax + t * vx), py - (ay + t * vy));
}

export function axisValueY(axis: AxisGeom, value: string | number): number {
  if (axis.kind === "categorical") {
    const anchor = axis.options.find((o) => o.value === value);
    if (!anchor) throw new Error(`${String(value)} is not an option of ${axis.path}`);
    return anchor.y;
  }
  const [lo, hi] = axis.domain as [number, number];
  const fraction = (Number(value) - lo) / (hi - lo);
  return axis.yTop + (1 - fraction) * (axis.yBottom - axis.yTop);
}

export function axisCoordinate(axis: AxisGeom, y: number): number {
  const height = axis.yBottom - axis.yTop;
  let fraction = (y - axis.yTop) / height;
  fraction = Math.max(0, Math.min(1, fraction));
  if (axis.kind === "numeric") {
    const [lo, hi] = axis.domain as [number, number];
    return lo + (1 - fraction) * (hi - lo);
  }
  const count = axis.options.length;
  return Math.max(0, Math.min(count - 1, fraction * count - 0.5));
}

export function hitTest(
  geometry: Geometry, x: number, y: number, tolerance = 6,
): HitTarget {
  let bestOption: { d: number; path: string; value: string } | null = null;
  for (const axis of geometry.axes) {
    for (const anchor of axis.options) {
      const d = Math.hypot(x - axis.x, y - anchor.y);
      if (d > tolerance) continue;
      if (
        bestOption === null ||
        d < bestOption.d ||
        (d === bestOption.d &&
          (axis.path < bestOption.path ||
            (axis.path === bestOption.path && anchor.value < bestOption.value)))
      ) {
        bestOption = { d, path: axis.path, value: anchor.value };
      }
    }
  }
  if (bestOption) return { type: "option", axisPath: bestOption.path, value: bestOption.value };

  let bestBox: { depth: number; path: string } | null = null;
  for (const box of geometry.branchBoxes) {
    const [x0, y0, x1, y1] = box.rect;
    if (x0 <= x && x <= x1 && y0 <= y && y <= y1) {
      const depth = box.path.split("/").length;
      if (!bestBox || depth > bestBox.depth) bestBox = { depth, path: box.path };
    }
  }
  if (bestBox) return { type: "branchBox", branchPath: bestBox.path };

  let bestLine: { d: number; id: string } | null = null;
  for (const line of geometry.polylines) {
    const pts = line.points;
    for (let i = 0; i + 3 < pts.length; i += 2) {
      const d = segmentDistance(x, y, pts[i], pts[i + 1], pts[i + 2], pts[i + 3]);
      if (d > tolerance) continue;
      if (!bestLine || d < bestLine.d || (d === bestLine.d && line.id < bestLine.id)) {
        bestLine = { d, id: line.id };
      }
    }
  }
  if (bestLine) return { type: "polyline", observationId: bestLine.id };

  let bestAxis: { d: number; path: string; value: number } | null = null;
  for (const axis of geometry.axes) {
    const d = segmentDistance(x, y, axis.x, axis.yTop, axis.x, axis.yBottom);
    if (d > tolerance) continue;
    if (!bestAxis || d < bestAxis.d || (d === bestAxis.d && axis.path < bestAxis.path)) {
      bestAxis = { d, path: axis.path, value: axisCoordinate(axis, y) };
    }
  }
  if (bestAxis) return { type: "axisValue", axisPath: bestAxis.path, value: bestAxis.value };

  return { type: "none" };
}

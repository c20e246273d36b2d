/** SVG DOM rendering of geometry plus interaction state.
 *
 * Everything is drawn as scalable vector elements in the same coordinate
 * space the server uses for its SVG export, so visual diffing between the
 * two is a plain overlay.
 */

import { axisValueY } from "./hittest.js";
import type { AppState } from "./state.js";
import type { Geometry } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el(name: string, attrs: Record<string, string>, text?: string): SVGElement {
  const node = document.createElementNS(SVG_NS, name) as SVGElement;
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmt(value: number): string {
  return String(Math.round(value * 1000) / 1000);
}

export function renderApp(svg: SVGSVGElement, state: AppState): void {
  svg.replaceChildren();
  const geometry = state.geometry;
  if (!geometry) return;
  const { width, height } = geometry.canvas;
  svg.setAttribute("width", fmt(width));
  svg.setAttribute("height", fmt(height));
  svg.setAttribute("viewBox", `0 0 ${fmt(width)} ${fmt(height)}`);

  svg.appendChild(renderBoxes(geometry));
  svg.appendChild(renderBrushes(geometry, state));
  svg.appendChild(renderAxes(geometry));
  svg.appendChild(renderOptions(geometry, state));
  svg.appendChild(renderPolylines(geometry, state));
  if (state.session?.active) svg.appendChild(renderEditOverlay(geometry, state));
}

function renderBoxes(geometry: Geometry): SVGElement {
  const group = el("g", { class: "boxes" });
  for (const box of geometry.branchBoxes) {
    const [x0, y0, x1, y1] = box.rect;
    group.appendChild(el("rect", {
      class: "branch-box",
      "data-path": box.path,
      x: fmt(x0), y: fmt(y0),
      width: fmt(x1 - x0), height: fmt(y1 - y0),
    }));
  }
  return group;
}

function renderBrushes(geometry: Geometry, state: AppState): SVGElement {
  const group = el("g", { class: "brushes" });
  for (const [path, [lo, hi]] of Object.entries(state.brushes)) {
    const axis = geometry.axes.find((a) => a.path === path);
    if (!axis || axis.kind !== "numeric") continue;
    const yLo = axisValueY(axis, lo);
    const yHi = axisValueY(axis, hi);
    group.appendChild(el("rect", {
      class: "brush",
      "data-path": path,
      x: fmt(axis.x - 5), y: fmt(Math.min(yLo, yHi)),
      width: "10", height: fmt(Math.abs(yLo - yHi)),
    }));
  }
  return group;
}

function renderAxes(geometry: Geometry): SVGElement {
  const group = el("g", { class: "axes" });
  for (const axis of geometry.axes) {
    group.appendChild(el("line", {
      class: "axis",
      "data-path": axis.path,
      x1: fmt(axis.x), y1: fmt(axis.yTop),
      x2: fmt(axis.x), y2: fmt(axis.yBottom),
    }));
    group.appendChild(el("text", {
      class: "axis-label",
      x: fmt(axis.x), y: fmt(axis.yTop - 8), "text-anchor": "middle",
    }, axis.label));
    if (axis.kind === "numeric" && axis.domain) {
      group.appendChild(el("text", {
        class: "tick", x: fmt(axis.x + 4), y: fmt(axis.yTop + 4),
      }, String(axis.domain[1])));
      group.appendChild(el("text", {
        class: "tick", x: fmt(axis.x + 4), y: fmt(axis.yBottom),
      }, String(axis.domain[0])));
    }
  }
  return group;
}

function renderOptions(geometry: Geometry, state: AppState): SVGElement {
  const group = el("g", { class: "options" });
  for (const axis of geometry.axes) {
    for (const anchor of axis.options) {
      const classes = ["option"];
      if (anchor.expandable) classes.push("expandable");
      const branchPath = `${axis.path}/${anchor.value}`;
      if (state.expansion.includes(branchPath)) classes.push("expanded");
      const marker = el("circle", {
        class: classes.join(" "),
        "data-axis": axis.path,
        "data-value": anchor.value,
        cx: fmt(axis.x), cy: fmt(anchor.y), r: "4",
      });
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = anchor.expandable
        ? `${anchor.value} (click to expand or collapse)`
        : anchor.value;
      marker.appendChild(title);
      group.appendChild(marker);
      group.appendChild(el("text", {
        class: anchor.expandable ? "option-label expandable" : "option-label",
        x: fmt(axis.x + 7), y: fmt(anchor.y + 4),
      }, anchor.value));
    }
  }
  return group;
}

function renderPolylines(geometry: Geometry, state: AppState): SVGElement {
  const group = el("g", { class: "lines" });
  const highlighted = new Set(state.highlighted);
  const pointsAttr = (points: number[]) => {
    const pairs: string[] = [];
    for (let i = 0; i + 1 < points.length; i += 2) {
      pairs.push(`${fmt(points[i])},${fmt(points[i + 1])}`);
    }
    return pairs.join(" ");
  };
  for (const line of geometry.polylines) {
    group.appendChild(el("polyline", {
      class: highlighted.has(line.id) ? "line highlighted" : "line",
      "data-id": line.id,
      points: pointsAttr(line.points),
      fill: "none",
    }));
  }
  // re-append highlighted lines so they draw on top
  for (const line of Array.from(group.children)) {
    if (line.classList.contains("highlighted")) group.appendChild(line);
  }
  return group;
}

function renderEditOverlay(geometry: Geometry, state: AppState): SVGElement {
  const group = el("g", { class: "edit-overlay" });
  const session = state.session;
  if (!session) return group;
  const byPath = new Map(session.selections.map((row) => [row.path, row]));
  const vertices: Array<{ x: number; y: number; label: string; value: string | number }> = [];
  for (const axis of geometry.axes) {
    const row = byPath.get(axis.path);
    if (!row) continue;
    vertices.push({
      x: axis.x,
      y: axisValueY(axis, row.value),
      label: row.label,
      value: row.value,
    });
  }
  if (vertices.length >= 2) {
    group.appendChild(el("polyline", {
      class: "edit-line",
      points: vertices.map((v) => `${fmt(v.x)},${fmt(v.y)}`).join(" "),
      fill: "none",
    }));
  }
  for (const vertex of vertices) {
    group.appendChild(el("circle", {
      class: "edit-vertex", cx: fmt(vertex.x), cy: fmt(vertex.y), r: "4.5",
    }));
    group.appendChild(el("text", {
      class: "edit-tooltip",
      x: fmt(vertex.x + 8), y: fmt(vertex.y - 8),
    }, `${vertex.label}: ${String(vertex.value)}`));
  }
  return group;
}

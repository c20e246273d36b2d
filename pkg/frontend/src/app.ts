/** Controller: wires pointer input, the store, and the SVG view together. */

import { ApiClient } from "./api.js";
import { hitTest } from "./hittest.js";
import { AppStore } from "./state.js";
import type { CanvasSpec, HitTarget } from "./types.js";
import { renderApp } from "./view.js";

export interface App {
  store: AppStore;
  svg: SVGSVGElement;
  pointerMoved(x: number, y: number): Promise<void>;
  pointerClicked(x: number, y: number): Promise<void>;
  brushStart(x: number, y: number): void;
  brushMove(y: number): void;
  brushEnd(): Promise<void>;
}

export function createApp(
  container: Element,
  api: ApiClient,
  canvas?: CanvasSpec,
): App {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
  svg.setAttribute("class", "cpc-canvas");
  container.appendChild(svg);

  const store = new AppStore(api, canvas);
  store.subscribe((state) => renderApp(svg, state));

  let brushing: { axisPath: string; anchor: number; latest: number } | null = null;

  function localHit(x: number, y: number): HitTarget {
    const geometry = store.state.geometry;
    if (!geometry) return { type: "none" };
    return hitTest(geometry, x, y);
  }

  async function pointerMoved(x: number, y: number): Promise<void> {
    if (brushing) return; // drag in progress
    await store.setHover(localHit(x, y));
  }

  async function pointerClicked(x: number, y: number): Promise<void> {
    const geometry = store.state.geometry;
    if (!geometry) return;
    const target = localHit(x, y);
    if (store.editing) {
      // in edit mode, clicking picks values instead of toggling branches
      if (target.type === "option") {
        await store.selectValue(target.axisPath, target.value);
      } else if (target.type === "axisValue") {
        const axis = geometry.axes.find((a) => a.path === target.axisPath);
        if (axis?.kind === "numeric") {
          await store.selectValue(target.axisPath, target.value);
        }
      } else if (target.type === "polyline" && !store.state.session?.selections.length) {
        // clicking a line with an empty scratch pad restarts as a duplicate
        await store.cancelEdit();
        await store.beginEdit("duplicate", target.observationId);
      }
      return;
    }
    if (target.type === "option") {
      const axis = geometry.axes.find((a) => a.path === target.axisPath);
      const anchor = axis?.options.find((o) => o.value === target.value);
      if (anchor?.expandable) {
        await store.toggleBranch(`${target.axisPath}/${target.value}`);
      }
    }
  }

  function brushStart(x: number, y: number): void {
    const geometry = store.state.geometry;
    if (!geometry || store.editing) return;
    const target = localHit(x, y);
    if (target.type !== "axisValue") return;
    const axis = geometry.axes.find((a) => a.path === target.axisPath);
    if (axis?.kind !== "numeric") return;
    brushing = { axisPath: target.axisPath, anchor: target.value, latest: target.value };
  }

  function brushMove(y: number): void {
    const geometry = store.state.geometry;
    if (!brushing || !geometry) return;
    const axis = geometry.axes.find((a) => a.path === brushing!.axisPath);
    if (!axis || !axis.domain) return;
    const height = axis.yBottom - axis.yTop;
    const fraction = Math.max(0, Math.min(1, (y - axis.yTop) / height));
    brushing.latest = axis.domain[0] + (1 - fraction) * (axis.domain[1] - axis.domain[0]);
  }

  async function brushEnd(): Promise<void> {
    if (!brushing) return;
    const { axisPath, anchor, latest } = brushing;
    brushing = null;
    const lo = Math.min(anchor, latest);
    const hi = Math.max(anchor, latest);
    const geometry = store.state.geometry;
    const axis = geometry?.axes.find((a) => a.path === axisPath);
    const span = axis?.domain ? axis.domain[1] - axis.domain[0] : 0;
    if (span > 0 && hi - lo < span * 0.005) {
      await store.setBrush(axisPath, null); // a click clears the brush
    } else {
      await store.setBrush(axisPath, [lo, hi]);
    }
  }

  svg.addEventListener("pointermove", (event) => {
    const mouse = event as PointerEvent;
    if (brushing) {
      brushMove(mouse.offsetY);
    } else {
      void pointerMoved(mouse.offsetX, mouse.offsetY);
    }
  });
  svg.addEventListener("click", (event) => {
    const mouse = event as PointerEvent;
    void pointerClicked(mouse.offsetX, mouse.offsetY);
  });
  svg.addEventListener("pointerdown", (event) => {
    const mouse = event as PointerEvent;
    brushStart(mouse.offsetX, mouse.offsetY);
  });
  svg.addEventListener("pointerup", () => {
    void brushEnd();
  });

  return { store, svg, pointerMoved, pointerClicked, brushStart, brushMove, brushEnd };
}

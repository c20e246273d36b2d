/** Wire-format mirrors of the server's JSON payloads. */

export interface CanvasSpec {
  width: number;
  height: number;
  margin: number;
}

export interface OptionAnchor {
  value: string;
  y: number;
  band: [number, number];
  expandable: boolean;
}

export interface AxisGeom {
  path: string;
  label: string;
  x: number;
  yTop: number;
  yBottom: number;
  kind: "categorical" | "numeric";
  domain: [number, number] | null;
  options: OptionAnchor[];
}

export interface BranchBox {
  path: string;
  /** [x0, y0, x1, y1] */
  rect: [number, number, number, number];
}

export interface PolylineGeom {
  id: string;
  /** flat [x, y, x, y, ...] */
  points: number[];
}

export interface Geometry {
  canvas: CanvasSpec;
  totalWeight: number;
  axes: AxisGeom[];
  branchBoxes: BranchBox[];
  polylines: PolylineGeom[];
}

export type HitTarget =
  | { type: "polyline"; observationId: string }
  | { type: "option"; axisPath: string; value: string }
  | { type: "branchBox"; branchPath: string }
  | { type: "axisValue"; axisPath: string; value: number }
  | { type: "none" };

export interface HighlightResponse {
  observationIds: string[];
  mode: string;
  editActive: boolean;
}

export interface SelectionRow {
  path: string;
  label: string;
  value: string | number;
}

export interface SessionState {
  sessionId: string;
  active: boolean;
  origin: { kind: string; sourceId: string | null };
  selections: SelectionRow[];
  missing: string[];
}

export interface DatasetInfo {
  datasetId: string;
  dimensions: number;
  observations: number;
}

export type BrushMap = Record<string, [number, number]>;

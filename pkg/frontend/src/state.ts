/** UI state container.
 *
 * The client never computes authoritative results: layout geometry,
 * highlight sets, and edit validity all come from the server, and the
 * expansion shown is always the one acknowledged by the latest layout
 * response. Stale in-flight responses are dropped (latest request wins).
 */

import { ApiClient } from "./api.js";
import type {
  BrushMap,
  CanvasSpec,
  Geometry,
  HitTarget,
  SessionState,
} from "./types.js";

export interface AppState {
  datasetId: string | null;
  geometry: Geometry | null;
  /** branch paths acknowledged by the last layout response */
  expansion: string[];
  brushes: BrushMap;
  highlighted: string[];
  hover: HitTarget;
  session: SessionState | null;
  error: string | null;
}

export type Listener = (state: AppState) => void;

const DEFAULT_CANVAS: CanvasSpec = { width: 1200, height: 640, margin: 40 };

export class AppStore {
  state: AppState = {
    datasetId: null,
    geometry: null,
    expansion: [],
    brushes: {},
    highlighted: [],
    hover: { type: "none" },
    session: null,
    error: null,
  };

  private listeners: Listener[] = [];
  private layoutSeq = 0;
  private highlightSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly canvas: CanvasSpec = DEFAULT_CANVAS,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    this.notify();
  }

  get editing(): boolean {
    return this.state.session !== null && this.state.session.active;
  }

  /** Upload a CPC-JSON document (or {format, payload} body) and show it. */
  async loadDocument(document: unknown): Promise<void> {
    try {
      const { datasetId } = await this.api.loadDataset(document);
      this.update({
        datasetId, geometry: null, expansion: [], brushes: {},
        highlighted: [], session: null, error: null,
      });
      await this.requestLayout([]);
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }

  /** Show a dataset that already lives on the server. */
  async selectDataset(datasetId: string): Promise<void> {
    this.update({
      datasetId, geometry: null, expansion: [], brushes: {},
      highlighted: [], session: null, error: null,
    });
    await this.requestLayout([]);
  }

  /** Request geometry; only the latest in-flight request may apply. */
  async requestLayout(expansion: string[]): Promise<void> {
    const { datasetId } = this.state;
    if (!datasetId) return;
    const ticket = ++this.layoutSeq;
    try {
      const geometry = await this.api.layout(datasetId, expansion, this.canvas);
      if (ticket !== this.layoutSeq) return; // superseded
      this.update({ geometry, expansion: [...expansion], error: null });
    } catch (error) {
      if (ticket !== this.layoutSeq) return;
      this.update({ error: describe(error) });
    }
  }

  /** Click on an expandable option: toggle its branch and re-request layout. */
  async toggleBranch(branchPath: string): Promise<void> {
    const current = this.state.expansion;
    let next: string[];
    if (current.includes(branchPath)) {
      next = current.filter(
        (p) => p !== branchPath && !p.startsWith(branchPath + "/"),
      );
    } else {
      next = [...current, branchPath];
    }
    await this.requestLayout(next);
  }

  /** Pointer feedback; authoritative highlight set fetched per target. */
  async setHover(target: HitTarget): Promise<void> {
    this.update({ hover: target });
    if (this.editing) return; // highlighting is disabled in edit mode
    const { datasetId } = this.state;
    if (!datasetId) return;
    const ticket = ++this.highlightSeq;
    if (target.type === "none") {
      await this.refreshBrushHighlight(ticket);
      return;
    }
    try {
      const response = await this.api.highlightTarget(datasetId, target);
      if (ticket !== this.highlightSeq) return;
      this.update({ highlighted: response.observationIds });
    } catch (error) {
      if (ticket !== this.highlightSeq) return;
      this.update({ error: describe(error) });
    }
  }

  /** Replace (or clear with null) the brush interval on a numeric axis. */
  async setBrush(axisPath: string, interval: [number, number] | null): Promise<void> {
    const brushes: BrushMap = { ...this.state.brushes };
    if (interval === null) {
      delete brushes[axisPath];
    } else {
      brushes[axisPath] = interval;
    }
    this.update({ brushes });
    if (!this.editing) await this.refreshBrushHighlight(++this.highlightSeq);
  }

  private async refreshBrushHighlight(ticket: number): Promise<void> {
    const { datasetId, brushes } = this.state;
    if (!datasetId) return;
    if (Object.keys(brushes).length === 0) {
      if (ticket === this.highlightSeq) this.update({ highlighted: [] });
      return;
    }
    try {
      const response = await this.api.highlightBrushes(datasetId, brushes);
      if (ticket !== this.highlightSeq) return;
      this.update({ highlighted: response.observationIds });
    } catch (error) {
      if (ticket !== this.highlightSeq) return;
      this.update({ error: describe(error) });
    }
  }

  async beginEdit(origin: "scratch" | "duplicate", sourceId?: string): Promise<void> {
    const { datasetId } = this.state;
    if (!datasetId) return;
    try {
      const session = await this.api.editBegin(datasetId, origin, sourceId);
      this.highlightSeq++; // drop any in-flight highlight response
      this.update({ session, highlighted: [], error: null });
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }

  async selectValue(path: string, value: string | number): Promise<void> {
    const { datasetId, session } = this.state;
    if (!datasetId || !session) return;
    try {
      const next = await this.api.editSelect(datasetId, session.sessionId, path, value);
      this.update({ session: next, error: null });
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }

  async clearValue(path: string): Promise<void> {
    const { datasetId, session } = this.state;
    if (!datasetId || !session) return;
    try {
      const next = await this.api.editClear(datasetId, session.sessionId, path);
      this.update({ session: next, error: null });
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }

  /** Commit the working line, then refresh the view from the server. */
  async commitEdit(): Promise<string | null> {
    const { datasetId, session } = this.state;
    if (!datasetId || !session) return null;
    try {
      const { observationId } = await this.api.editCommit(datasetId, session.sessionId);
      this.update({ session: null, error: null });
      await this.requestLayout(this.state.expansion);
      return observationId;
    } catch (error) {
      this.update({ error: describe(error) });
      return null;
    }
  }

  async cancelEdit(): Promise<void> {
    const { datasetId, session } = this.state;
    if (!datasetId || !session) return;
    try {
      await this.api.editCancel(datasetId, session.sessionId);
    } finally {
      this.update({ session: null });
    }
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}

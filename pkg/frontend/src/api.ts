/** Typed client for the documented JSON API. */

import type {
  BrushMap,
  CanvasSpec,
  DatasetInfo,
  Geometry,
  HighlightResponse,
  HitTarget,
  SessionState,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(private readonly baseUrl = "", fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    let payload: unknown = null;
    try {
      payload = text ? JSON.parse(text) : null;
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const detail = payload as { code?: string; message?: string } | null;
      throw new ApiError(
        response.status,
        detail?.code ?? "error",
        detail?.message ?? `${method} ${path} failed with ${response.status}`,
      );
    }
    return payload as T;
  }

  listDatasets(): Promise<{ datasets: DatasetInfo[] }> {
    return this.request("GET", "/api/datasets");
  }

  loadDataset(document: unknown): Promise<{ datasetId: string }> {
    return this.request("POST", "/api/datasets", document);
  }

  schema(datasetId: string): Promise<unknown> {
    return this.request("GET", `/api/datasets/${datasetId}/schema`);
  }

  layout(datasetId: string, expansion: string[] | "all", canvas: CanvasSpec): Promise<Geometry> {
    return this.request("POST", `/api/datasets/${datasetId}/layout`, { expansion, canvas });
  }

  highlightTarget(datasetId: string, target: HitTarget): Promise<HighlightResponse> {
    return this.request("POST", `/api/datasets/${datasetId}/highlight`, { target });
  }

  highlightBrushes(datasetId: string, brushes: BrushMap): Promise<HighlightResponse> {
    return this.request("POST", `/api/datasets/${datasetId}/highlight`, { brushes });
  }

  editBegin(datasetId: string, origin: "scratch" | "duplicate", sourceId?: string): Promise<SessionState> {
    const body: Record<string, unknown> = { action: "begin", origin };
    if (sourceId !== undefined) body.sourceId = sourceId;
    return this.request("POST", `/api/datasets/${datasetId}/edit`, body);
  }

  editSelect(
    datasetId: string, sessionId: string, path: string, value: string | number,
  ): Promise<SessionState> {
    return this.request("POST", `/api/datasets/${datasetId}/edit`, {
      action: "select", sessionId, path, value,
    });
  }

  editClear(datasetId: string, sessionId: string, path: string): Promise<SessionState> {
    return this.request("POST", `/api/datasets/${datasetId}/edit`, {
      action: "clear", sessionId, path,
    });
  }

  editCommit(datasetId: string, sessionId: string): Promise<{ observationId: string }> {
    return this.request("POST", `/api/datasets/${datasetId}/edit`, {
      action: "commit", sessionId,
    });
  }

  editCancel(datasetId: string, sessionId: string): Promise<{ closed: boolean }> {
    return this.request("POST", `/api/datasets/${datasetId}/edit`, {
      action: "cancel", sessionId,
    });
  }

  exportSvgUrl(datasetId: string, expansion: string[]): string {
    const query = encodeURIComponent(expansion.join(","));
    return `${this.baseUrl}/api/datasets/${datasetId}/export.svg?expansion=${query}`;
  }
}

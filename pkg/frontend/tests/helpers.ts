import type { FetchLike } from "../src/api.js";

export interface Exchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

export interface LoggedRequest {
  method: string;
  path: string;
  body: unknown;
}

export function deepEqual(a: unknown, b: unknown): boolean {
  if (a === b) return true;
  if (typeof a === "number" && typeof b === "number") return a === b;
  if (Array.isArray(a) && Array.isArray(b)) {
    return a.length === b.length && a.every((item, i) => deepEqual(item, b[i]));
  }
  if (a && b && typeof a === "object" && typeof b === "object") {
    const keysA = Object.keys(a as object).sort();
    const keysB = Object.keys(b as object).sort();
    if (!deepEqual(keysA, keysB)) return false;
    return keysA.every((key) =>
      deepEqual((a as Record<string, unknown>)[key], (b as Record<string, unknown>)[key]),
    );
  }
  return false;
}

/** Replays recorded server exchanges; each is consumed at most once so a
 * repeated request (e.g. the layout refresh after a commit) gets the next
 * recorded response, exactly as the live server would answer. */
export class FakeServer {
  readonly log: LoggedRequest[] = [];
  private readonly used = new Set<number>();

  constructor(private readonly exchanges: Exchange[]) {}

  fetch: FetchLike = async (input, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body !== undefined ? JSON.parse(init.body as string) : undefined;
    this.log.push({ method, path: input, body });
    const index = this.exchanges.findIndex(
      (e, i) =>
        !this.used.has(i) &&
        e.method === method &&
        e.path === input &&
        deepEqual(e.body ?? undefined, body),
    );
    if (index < 0) {
      throw new Error(`no recorded exchange for ${method} ${input} ${JSON.stringify(body)}`);
    }
    this.used.add(index);
    const match = this.exchanges[index];
    return new Response(JSON.stringify(match.response), {
      status: match.status,
      headers: { "content-type": "application/json" },
    });
  };

  requestsTo(pathSuffix: string): LoggedRequest[] {
    return this.log.filter((entry) => entry.path.endsWith(pathSuffix));
  }
}

/** A fetch whose responses are resolved manually, for ordering tests. */
export class ManualFetch {
  readonly pending: Array<{
    method: string;
    path: string;
    body: unknown;
    resolve: (payload: unknown, status?: number) => void;
  }> = [];

  fetch: FetchLike = (input, init) =>
    new Promise<Response>((resolvePromise) => {
      this.pending.push({
        method: init?.method ?? "GET",
        path: input,
        body: init?.body !== undefined ? JSON.parse(init.body as string) : undefined,
        resolve: (payload, status = 200) =>
          resolvePromise(
            new Response(JSON.stringify(payload), {
              status,
              headers: { "content-type": "application/json" },
            }),
          ),
      });
    });
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

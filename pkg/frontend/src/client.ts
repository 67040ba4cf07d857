import {
  ConflictBody,
  MutationAck,
  MutationOp,
  MutationRequest,
  PairSnapshot,
  SearchResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
    message: string,
  ) {
    super(message);
  }
}

export interface MutationOutcome {
  ack: MutationAck;
  snapshot: PairSnapshot;
  /** Number of times a conflicting revision forced a refetch. */
  conflicts: number;
}

/**
 * Thin client over the annotation service. Mutations use optimistic
 * concurrency: each request names the revision it was built against and the
 * server rejects stale writers with 409.
 */
export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly meetingId: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async fetchView(t: string, s: string, annotator?: string): Promise<PairSnapshot> {
    const params = new URLSearchParams({ t, s });
    if (annotator !== undefined) {
      params.set("annotator", annotator);
    }
    const response = await this.fetchImpl(
      `${this.base}/meetings/${this.meetingId}/view?${params}`,
    );
    if (!response.ok) {
      throw await this.asError(response);
    }
    return (await response.json()) as PairSnapshot;
  }

  /**
   * Post ops built against `revision`. On 409 the view is refetched and the
   * same ops array is sent again, unchanged, against the fresh revision; the
   * ops themselves are never rebuilt or appended to, so a retry can never
   * double-apply a gesture. Gives up after `maxRetries` conflicts.
   */
  async mutate(
    t: string,
    s: string,
    revision: number,
    ops: MutationOp[],
    annotator?: string,
    maxRetries = 3,
  ): Promise<MutationOutcome> {
    let expected = revision;
    let conflicts = 0;
    for (;;) {
      const request: MutationRequest = { expected_revision: expected, ops };
      const response = await this.fetchImpl(
        `${this.base}/meetings/${this.meetingId}/mutations`,
        {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify(request),
        },
      );
      if (response.status === 409) {
        conflicts += 1;
        if (conflicts > maxRetries) {
          const body = (await response.json()) as ConflictBody;
          throw new ApiError(409, body, "too many concurrent edits; reload the pair");
        }
        const fresh = await this.fetchView(t, s, annotator);
        expected = fresh.revision;
        continue;
      }
      if (!response.ok) {
        throw await this.asError(response);
      }
      const ack = (await response.json()) as MutationAck;
      const snapshot = await this.fetchView(t, s, annotator);
      return { ack, snapshot, conflicts };
    }
  }

  /** Server-side regex search so the pattern dialect matches the engine. */
  async search(t: string, pattern: string, caseSensitive = true): Promise<SearchResult> {
    const params = new URLSearchParams({ t, pattern });
    if (!caseSensitive) {
      params.set("case_sensitive", "false");
    }
    const response = await this.fetchImpl(
      `${this.base}/meetings/${this.meetingId}/search?${params}`,
    );
    if (!response.ok) {
      throw await this.asError(response);
    }
    return (await response.json()) as SearchResult;
  }

  mediaUrl(): string {
    return `${this.base}/meetings/${this.meetingId}/media`;
  }

  private async asError(response: Response): Promise<ApiError> {
    let body: unknown = null;
    let detail = response.statusText;
    try {
      body = await response.json();
      const maybe = body as { detail?: string };
      if (typeof maybe.detail === "string") {
        detail = maybe.detail;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    return new ApiError(response.status, body, detail);
  }
}

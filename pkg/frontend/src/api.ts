/** Thin typed client over the scoring service's HTTP endpoints.
 *
 * Every number the UI ever displays (composites, deltas, flags) comes
 * out of these calls; nothing in this package re-derives them.
 */

import type {
  CriterionInfo,
  CriterionScoreWire,
  IU,
  RankEntry,
  Revision,
  Substitution,
  TaiResponse,
  WhatifResponse,
} from "./types.js";

/** The server answered with a domain error envelope. */
export class ApiRequestError extends Error {
  constructor(
    readonly code: string,
    readonly status: number,
    message: string,
    readonly details: string[] = [],
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

/** The server could not be reached at all. */
export class ServerUnreachableError extends Error {
  constructor(cause: unknown) {
    super(`server unreachable: ${String(cause)}`);
    this.name = "ServerUnreachableError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (cause) {
      throw new ServerUnreachableError(cause);
    }
    if (!response.ok) {
      let code = "internal";
      let message = `HTTP ${response.status}`;
      let details: string[] = [];
      try {
        const body = (await response.json()) as {
          error?: { code?: string; message?: string; details?: string[] };
        };
        code = body.error?.code ?? code;
        message = body.error?.message ?? message;
        details = body.error?.details ?? [];
      } catch {
        // keep the defaults; the envelope was not JSON
      }
      throw new ApiRequestError(code, response.status, message, details);
    }
    return (await response.json()) as T;
  }

  async health(): Promise<void> {
    await this.request<{ status: string }>("/health");
  }

  async criteria(): Promise<CriterionInfo[]> {
    const body = await this.request<{ criteria: CriterionInfo[] }>("/criteria");
    return body.criteria;
  }

  async listIus(): Promise<IU[]> {
    const body = await this.request<{ ius: IU[] }>("/ius");
    return body.ius;
  }

  async getIu(iuId: string): Promise<IU> {
    return this.request<IU>(`/ius/${encodeURIComponent(iuId)}`);
  }

  async revisions(iuId: string): Promise<Revision[]> {
    const body = await this.request<{ revisions: Revision[] }>(
      `/ius/${encodeURIComponent(iuId)}/revisions`,
    );
    return body.revisions;
  }

  async commitRevision(
    iuId: string,
    scores: Record<string, CriterionScoreWire>,
    note: string,
    parentRevisionNo: number,
  ): Promise<Revision> {
    return this.request<Revision>(`/ius/${encodeURIComponent(iuId)}/revisions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        scores,
        note,
        parent_revision_no: parentRevisionNo,
      }),
    });
  }

  async rank(): Promise<RankEntry[]> {
    const body = await this.request<{ rank: RankEntry[] }>("/rank");
    return body.rank;
  }

  /** Server-side composite preview for a draft: the latest revision with
   * the given substitutions applied. */
  async whatif(iuId: string, substitutions: Substitution[]): Promise<WhatifResponse> {
    const params = new URLSearchParams();
    for (const { criterion, level } of substitutions) {
      params.append("criterion", criterion);
      params.append("level", String(level));
    }
    return this.request<WhatifResponse>(
      `/ius/${encodeURIComponent(iuId)}/whatif?${params.toString()}`,
    );
  }

  async tai(iuId: string): Promise<TaiResponse> {
    return this.request<TaiResponse>(`/ius/${encodeURIComponent(iuId)}/tai`);
  }
}

/** In-memory stand-in for the scoring service.
 *
 * Every composite, delta, and flag it serves is a literal fixture
 * (traced from the real service); the stub never computes a score, and
 * it throws on any draft it has no fixture for. A test can therefore
 * only ever display numbers that arrived as server responses.
 */

import type {
  CriterionInfo,
  CriterionScoreWire,
  RankEntry,
  Revision,
  TaiResponse,
} from "../src/types.js";

export const CRITERION_KEYS = [
  "superseedness",
  "economic_impact",
  "centralization",
  "immediacy_of_impact",
  "uniqueness",
  "counterfactual_impact",
] as const;

export interface StubState {
  criteria: CriterionInfo[];
  ius: Record<string, { id: string; name: string; description: string }>;
  revisions: Record<string, Revision[]>;
  rank: RankEntry[];
  /** "<criterion>=<level>&..." (sorted) -> server answer */
  whatifTable: Record<string, { composite: number; raw_sum: number }>;
  /** "<level>,...,<level>" in criterion order -> server answer */
  commitTable: Record<string, { composite: number; raw_sum: number }>;
  tai: Record<string, TaiResponse>;
  offline: boolean;
  log: string[];
}

export function stubCriteria(): CriterionInfo[] {
  return CRITERION_KEYS.map((key) => ({
    key,
    name: `Stub name for ${key}`,
    anchors: [1, 2, 3, 4, 5].map((level) => `anchor ${key} L${level} (from server)`),
  }));
}

function revision(
  iuId: string,
  revisionNo: number,
  levels: number[],
  composite: number,
  rawSum: number,
  note: string,
): Revision {
  const scores: Record<string, CriterionScoreWire> = {};
  CRITERION_KEYS.forEach((key, index) => {
    scores[key] = { level: levels[index]!, rationale: `${key} rationale` };
  });
  return {
    iu_id: iuId,
    revision_no: revisionNo,
    scores,
    composite,
    raw_sum: rawSum,
    recorded_at: "2026-08-10T00:00:00Z",
    note,
  };
}

/** Golden scenario: the wheel at {5,5,1,1,5,1} (server composite 60)
 * alongside the scored world-wide-web (70) and communism (63). */
export function makeGoldenStub(): StubState {
  return {
    criteria: stubCriteria(),
    ius: {
      wheel: { id: "wheel", name: "The Wheel", description: "Round." },
      "unscored-iu": { id: "unscored-iu", name: "Unscored", description: "" },
    },
    revisions: {
      wheel: [revision("wheel", 1, [5, 5, 1, 1, 5, 1], 60, 18, "initial")],
      "unscored-iu": [],
    },
    rank: [
      { iu_id: "world-wide-web", composite: 70 },
      { iu_id: "communism", composite: 63 },
      { iu_id: "wheel", composite: 60 },
    ],
    whatifTable: {
      // values the real service returns for these drafts of the wheel
      "immediacy_of_impact=5": { composite: 73, raw_sum: 22 },
      "immediacy_of_impact=3": { composite: 67, raw_sum: 20 },
      "centralization=3&immediacy_of_impact=5": { composite: 80, raw_sum: 24 },
      "uniqueness=4": { composite: 57, raw_sum: 17 },
    },
    commitTable: {
      "5,5,1,5,5,1": { composite: 73, raw_sum: 22 },
      "2,4,5,2,3,3": { composite: 63, raw_sum: 19 },
      "1,1,1,1,1,1": { composite: 20, raw_sum: 6 },
    },
    tai: {
      wheel: {
        iu_id: "wheel",
        flagged: false,
        reasons: ["tag 'ai-related' missing"],
        reason: "tag 'ai-related' missing",
      },
    },
    offline: false,
    log: [],
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function apiError(code: string, status: number, message: string, details?: string[]): Response {
  return json({ error: { code, message, ...(details ? { details } : {}) } }, status);
}

export function makeStubFetch(state: StubState) {
  return async (input: string, init?: RequestInit): Promise<Response> => {
    if (state.offline) {
      throw new TypeError("fetch failed (stub offline)");
    }
    const url = new URL(input);
    const method = (init?.method ?? "GET").toUpperCase();
    state.log.push(`${method} ${url.pathname}${url.search}`);

    if (method === "GET" && url.pathname === "/criteria") {
      return json({ criteria: state.criteria });
    }
    if (method === "GET" && url.pathname === "/ius") {
      return json({ ius: Object.values(state.ius) });
    }
    if (method === "GET" && url.pathname === "/rank") {
      return json({ rank: state.rank });
    }

    const iuMatch = url.pathname.match(/^\/ius\/([^/]+)(?:\/(\w+))?$/);
    if (iuMatch) {
      const iuId = decodeURIComponent(iuMatch[1]!);
      const tail = iuMatch[2];
      const iu = state.ius[iuId];
      if (!iu) return apiError("not_found", 404, `unknown IU: '${iuId}'`);

      if (method === "GET" && tail === undefined) {
        return json(iu);
      }
      if (method === "GET" && tail === "revisions") {
        return json({ revisions: state.revisions[iuId] ?? [] });
      }
      if (method === "POST" && tail === "revisions") {
        return postRevision(state, iuId, init);
      }
      if (method === "GET" && tail === "whatif") {
        return whatif(state, iuId, url);
      }
      if (method === "GET" && tail === "tai") {
        const answer = state.tai[iuId];
        if (!answer) return apiError("not_found", 404, `${iuId} has no revisions to assess`);
        return json(answer);
      }
    }
    throw new Error(`stub has no route for ${method} ${url.pathname}`);
  };
}

function whatif(state: StubState, iuId: string, url: URL): Response {
  const head = (state.revisions[iuId] ?? []).at(-1);
  if (!head) return apiError("not_found", 404, `${iuId} has no revisions to explore`);
  const criteria = url.searchParams.getAll("criterion");
  const levels = url.searchParams.getAll("level");
  const pairs = criteria
    .map((criterion, index) => `${criterion}=${levels[index]}`)
    .sort()
    .join("&");
  const answer = state.whatifTable[pairs];
  if (!answer) {
    throw new Error(`stub has no whatif fixture for: ${pairs}`);
  }
  return json({
    iu_id: iuId,
    criterion: criteria[0],
    level: Number(levels[0]),
    substitutions: criteria.map((criterion, index) => ({
      criterion,
      level: Number(levels[index]),
    })),
    composite: answer.composite,
    raw_sum: answer.raw_sum,
    delta: answer.composite - head.composite,
    base_revision_no: head.revision_no,
    base_composite: head.composite,
  });
}

async function postRevision(
  state: StubState,
  iuId: string,
  init?: RequestInit,
): Promise<Response> {
  const body = JSON.parse(String(init?.body ?? "{}")) as {
    scores?: Record<string, CriterionScoreWire>;
    note?: string;
    parent_revision_no?: number | null;
  };
  const scores = body.scores ?? {};
  const missing = CRITERION_KEYS.filter((key) => !(key in scores));
  if (missing.length) {
    return apiError(
      "invalid_input",
      422,
      "invalid scorecard",
      missing.map((key) => `missing criterion: ${key}`),
    );
  }
  const history = state.revisions[iuId] ?? [];
  const headNo = history.at(-1)?.revision_no ?? 0;
  if (body.parent_revision_no != null && body.parent_revision_no !== headNo) {
    return apiError(
      "conflict",
      409,
      `draft was based on revision ${body.parent_revision_no}, but the current head is ${headNo}; reload and retry`,
    );
  }
  const levels = CRITERION_KEYS.map((key) => scores[key]!.level);
  const answer = state.commitTable[levels.join(",")];
  if (!answer) {
    throw new Error(`stub has no commit fixture for levels: ${levels.join(",")}`);
  }
  const committed: Revision = {
    iu_id: iuId,
    revision_no: headNo + 1,
    scores,
    composite: answer.composite,
    raw_sum: answer.raw_sum,
    recorded_at: "2026-08-10T00:00:01Z",
    note: body.note ?? "",
  };
  state.revisions[iuId] = [...history, committed];
  const rank = state.rank.filter((entry) => entry.iu_id !== iuId);
  rank.push({ iu_id: iuId, composite: committed.composite });
  rank.sort((a, b) => b.composite - a.composite || (a.iu_id < b.iu_id ? -1 : 1));
  state.rank = rank;
  state.tai[iuId] = state.tai[iuId] ?? {
    iu_id: iuId,
    flagged: false,
    reasons: ["tag 'ai-related' missing"],
    reason: "tag 'ai-related' missing",
  };
  return json(committed, 201);
}

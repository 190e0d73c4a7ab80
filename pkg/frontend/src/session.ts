/** Scoring-session state machine.
 *
 * Holds one assessor's draft for one IU: six levels, six rationales,
 * and a commit note. Every composite, delta, or flag in the state is a
 * number the server sent back; when the draft changes, a debounced
 * preview request asks the server what the draft would score. Commits
 * are optimistic: the revision the draft was based on rides along, and
 * the server rejects the commit if someone else got there first.
 */

import { ApiClient, ApiRequestError, ServerUnreachableError } from "./api.js";
import { insertionPosition } from "./rank.js";
import type {
  CriterionInfo,
  CriterionScoreWire,
  RankEntry,
  Revision,
  Substitution,
  TaiResponse,
} from "./types.js";

export type SessionStatus = "loading" | "ready" | "offline" | "conflict";

export interface SessionState {
  iuId: string;
  iuName: string;
  status: SessionStatus;
  criteria: CriterionInfo[];
  draftLevels: Record<string, number>;
  draftRationales: Record<string, string>;
  note: string;
  /** Server-computed composite for the current draft; null until the
   * server has answered (or when the IU has no revision to preview from). */
  liveComposite: number | null;
  /** Server-computed draft-minus-latest-revision difference. */
  delta: number | null;
  previewPending: boolean;
  dirty: boolean;
  baseRevisionNo: number;
  history: Revision[];
  rank: RankEntry[];
  rankPreview: { position: number; total: number } | null;
  tai: TaiResponse | null;
  commitErrors: string[];
  offlineDetail: string;
}

const DEFAULT_DEBOUNCE_MS = 150;

type Listener = (state: Readonly<SessionState>) => void;

export class ScoringSession {
  private listeners = new Set<Listener>();
  private baseScores: Record<string, CriterionScoreWire> | null = null;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private previewSeq = 0;
  private inFlight: Promise<void> = Promise.resolve();

  readonly state: SessionState = {
    iuId: "",
    iuName: "",
    status: "loading",
    criteria: [],
    draftLevels: {},
    draftRationales: {},
    note: "",
    liveComposite: null,
    delta: null,
    previewPending: false,
    dirty: false,
    baseRevisionNo: 0,
    history: [],
    rank: [],
    rankPreview: null,
    tai: null,
    commitErrors: [],
    offlineDetail: "",
  };

  constructor(
    private readonly api: ApiClient,
    private readonly debounceMs: number = DEFAULT_DEBOUNCE_MS,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Awaits any in-flight preview/commit work; handy in tests. */
  async whenIdle(): Promise<void> {
    await this.inFlight;
  }

  async load(iuId: string): Promise<void> {
    this.state.iuId = iuId;
    this.state.status = "loading";
    this.state.commitErrors = [];
    this.notify();
    const work = this.doLoad(iuId);
    this.inFlight = work.catch(() => undefined);
    await work.catch(() => undefined);
  }

  private async doLoad(iuId: string): Promise<void> {
    try {
      const [criteria, iu, history, rank] = await Promise.all([
        this.api.criteria(),
        this.api.getIu(iuId),
        this.api.revisions(iuId),
        this.api.rank(),
      ]);
      const latest = history.length ? history[history.length - 1]! : null;

      this.state.criteria = criteria;
      this.state.iuName = iu.name;
      this.state.history = history;
      this.state.rank = rank;
      this.state.baseRevisionNo = latest?.revision_no ?? 0;
      this.baseScores = latest ? { ...latest.scores } : null;
      this.state.draftLevels = {};
      this.state.draftRationales = {};
      for (const criterion of criteria) {
        const base = latest?.scores[criterion.key];
        this.state.draftLevels[criterion.key] = base?.level ?? 1;
        this.state.draftRationales[criterion.key] = base?.rationale ?? "";
      }
      // the gauge starts on the committed composite: a server value
      this.state.liveComposite = latest?.composite ?? null;
      this.state.delta = latest ? 0 : null;
      this.state.tai = latest ? await this.api.tai(iuId) : null;
      this.state.dirty = this.computeDirty();
      this.refreshRankPreview();
      this.state.status = "ready";
      this.state.offlineDetail = "";
    } catch (error) {
      this.goOffline(error);
      throw error;
    } finally {
      this.notify();
    }
  }

  setLevel(criterionKey: string, level: number): void {
    if (this.state.status !== "ready") return;
    this.state.draftLevels[criterionKey] = level;
    this.state.dirty = this.computeDirty();
    this.schedulePreview();
    this.notify();
  }

  setRationale(criterionKey: string, text: string): void {
    if (this.state.status !== "ready") return;
    this.state.draftRationales[criterionKey] = text;
    this.state.dirty = this.computeDirty();
    this.notify();
  }

  setNote(text: string): void {
    this.state.note = text;
    this.notify();
  }

  private computeDirty(): boolean {
    if (!this.baseScores) return true; // nothing committed yet
    for (const [key, level] of Object.entries(this.state.draftLevels)) {
      if (this.baseScores[key]?.level !== level) return true;
    }
    for (const [key, text] of Object.entries(this.state.draftRationales)) {
      if ((this.baseScores[key]?.rationale ?? "") !== text) return true;
    }
    return false;
  }

  private substitutions(): Substitution[] {
    if (!this.baseScores) return [];
    return Object.entries(this.state.draftLevels)
      .filter(([key, level]) => this.baseScores![key]?.level !== level)
      .map(([criterion, level]) => ({ criterion, level }));
  }

  private schedulePreview(): void {
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.state.previewPending = true;
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      const work = this.runPreview();
      this.inFlight = work.catch(() => undefined);
    }, this.debounceMs);
  }

  private async runPreview(): Promise<void> {
    const seq = ++this.previewSeq;
    if (!this.baseScores) {
      // no revision to preview against; the first commit will bring the
      // server-computed composite back instead
      this.state.previewPending = false;
      this.notify();
      return;
    }
    const changes = this.substitutions();
    try {
      if (changes.length === 0) {
        const latest = this.state.history[this.state.history.length - 1]!;
        if (seq !== this.previewSeq) return;
        this.state.liveComposite = latest.composite;
        this.state.delta = 0;
      } else {
        const preview = await this.api.whatif(this.state.iuId, changes);
        if (seq !== this.previewSeq) return; // a newer draft superseded us
        this.state.liveComposite = preview.composite;
        this.state.delta = preview.delta;
      }
      this.refreshRankPreview();
      this.state.previewPending = false;
    } catch (error) {
      if (seq !== this.previewSeq) return;
      this.state.previewPending = false;
      this.goOffline(error);
    } finally {
      this.notify();
    }
  }

  private refreshRankPreview(): void {
    if (this.state.liveComposite === null) {
      this.state.rankPreview = null;
      return;
    }
    this.state.rankPreview = insertionPosition(
      this.state.rank,
      this.state.iuId,
      this.state.liveComposite,
    );
  }

  /** Commit the draft as the next revision. Returns the new revision,
   * or null when blocked client-side (not dirty, or empty note). */
  async commit(): Promise<Revision | null> {
    if (this.state.status !== "ready") return null;
    const errors: string[] = [];
    if (!this.state.dirty) {
      errors.push("nothing to commit: the draft matches the latest revision");
    }
    if (this.state.note.trim() === "") {
      errors.push("a note describing the new information is required");
    }
    if (errors.length) {
      this.state.commitErrors = errors;
      this.notify();
      return null;
    }

    const scores: Record<string, CriterionScoreWire> = {};
    for (const [key, level] of Object.entries(this.state.draftLevels)) {
      scores[key] = { level, rationale: this.state.draftRationales[key] ?? "" };
    }
    const work = this.doCommit(scores);
    this.inFlight = work.then(
      () => undefined,
      () => undefined,
    );
    return work;
  }

  private async doCommit(
    scores: Record<string, CriterionScoreWire>,
  ): Promise<Revision | null> {
    try {
      const revision = await this.api.commitRevision(
        this.state.iuId,
        scores,
        this.state.note.trim(),
        this.state.baseRevisionNo,
      );
      this.state.history = [...this.state.history, revision];
      this.state.baseRevisionNo = revision.revision_no;
      this.baseScores = { ...revision.scores };
      this.state.liveComposite = revision.composite;
      this.state.delta = 0;
      this.state.note = "";
      this.state.commitErrors = [];
      this.state.dirty = this.computeDirty();
      // ranking and the TAI badge reflect the new head
      this.state.rank = await this.api.rank();
      this.state.tai = await this.api.tai(this.state.iuId);
      this.refreshRankPreview();
      this.notify();
      return revision;
    } catch (error) {
      if (error instanceof ApiRequestError && error.code === "conflict") {
        this.state.status = "conflict";
      } else if (error instanceof ApiRequestError && error.code === "invalid_input") {
        this.state.commitErrors = error.details.length ? error.details : [error.message];
      } else {
        this.goOffline(error);
      }
      this.notify();
      return null;
    }
  }

  /** Reload the server state (after a conflict or to retry when offline). */
  async reload(): Promise<void> {
    await this.load(this.state.iuId);
  }

  private goOffline(error: unknown): void {
    if (error instanceof ServerUnreachableError) {
      this.state.status = "offline";
      this.state.offlineDetail = error.message;
    } else if (error instanceof ApiRequestError) {
      // a domain error is not connectivity loss; surface it inline
      this.state.commitErrors = [error.message, ...error.details];
    } else {
      this.state.status = "offline";
      this.state.offlineDetail = String(error);
    }
  }
}

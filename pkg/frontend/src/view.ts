/** DOM rendering for one scoring session.
 *
 * The skeleton is built once; render() syncs it from the session state.
 * Text inputs are only written when unfocused so typing never fights
 * the renderer.
 */

import type { ScoringSession, SessionState } from "./session.js";

export class ScoringView {
  private built = false;
  private criteriaBuiltFor = "";

  constructor(
    private readonly root: HTMLElement,
    private readonly session: ScoringSession,
  ) {}

  mount(): void {
    this.root.innerHTML = `
      <div data-testid="banner" class="banner" hidden>
        <span data-testid="banner-text"></span>
        <button type="button" data-testid="retry">Retry</button>
      </div>
      <div data-testid="conflict" class="conflict" hidden>
        <p>Someone else committed a revision first. Reload to continue from
           the new head; your draft will be discarded.</p>
        <button type="button" data-testid="conflict-reload">Reload</button>
      </div>
      <header>
        <h2 data-testid="iu-name"></h2>
        <span data-testid="tai-badge" class="tai-badge" hidden>TAI watch</span>
      </header>
      <section class="gauge">
        <div class="gauge-value" data-testid="composite">&mdash;</div>
        <div class="gauge-bar"><div class="gauge-fill" data-testid="gauge-fill"></div></div>
        <div data-testid="delta" class="delta"></div>
        <div data-testid="rank-preview" class="rank-preview"></div>
      </section>
      <form data-testid="criteria-form"></form>
      <section class="commit">
        <input type="text" data-testid="note" placeholder="What new information prompted this revision?" />
        <button type="button" data-testid="commit" disabled>Commit revision</button>
        <ul data-testid="commit-errors" class="errors"></ul>
      </section>
      <section>
        <h3>History</h3>
        <ol data-testid="history"></ol>
      </section>
      <section>
        <h3>Ranking</h3>
        <ol data-testid="rank-list"></ol>
      </section>
    `;

    this.query("retry").addEventListener("click", () => void this.session.reload());
    this.query("conflict-reload").addEventListener("click", () => void this.session.reload());
    const note = this.query<HTMLInputElement>("note");
    note.addEventListener("input", () => this.session.setNote(note.value));
    this.query("commit").addEventListener("click", () => void this.session.commit());

    this.built = true;
    this.session.subscribe((state) => this.render(state));
    this.render(this.session.state);
  }

  private query<T extends HTMLElement = HTMLElement>(testId: string): T {
    const el = this.root.querySelector<T>(`[data-testid="${testId}"]`);
    if (!el) throw new Error(`missing element: ${testId}`);
    return el;
  }

  private render(state: Readonly<SessionState>): void {
    if (!this.built) return;
    const ready = state.status === "ready";

    const banner = this.query("banner");
    banner.hidden = state.status !== "offline";
    this.query("banner-text").textContent =
      state.status === "offline"
        ? `Server unreachable. ${state.offlineDetail}`
        : "";

    this.query("conflict").hidden = state.status !== "conflict";
    this.query("iu-name").textContent = state.iuName;

    this.query("composite").textContent =
      state.liveComposite === null ? "—" : String(state.liveComposite);
    this.query("gauge-fill").style.width =
      state.liveComposite === null ? "0%" : `${state.liveComposite}%`;

    const delta = this.query("delta");
    if (state.delta === null) {
      delta.textContent = "";
    } else if (state.delta === 0) {
      delta.textContent = state.dirty ? "±0 vs last revision" : "committed";
    } else {
      const sign = state.delta > 0 ? "+" : "−";
      delta.textContent = `${sign}${Math.abs(state.delta)} vs last revision`;
    }

    const badge = this.query("tai-badge");
    badge.hidden = !(state.tai?.flagged ?? false);
    badge.title = state.tai?.reason ?? "";

    this.query("rank-preview").textContent = state.rankPreview
      ? `would rank ${state.rankPreview.position} of ${state.rankPreview.total}`
      : "";

    this.renderCriteria(state, ready);

    const note = this.query<HTMLInputElement>("note");
    if (document.activeElement !== note && note.value !== state.note) {
      note.value = state.note;
    }
    note.disabled = !ready;
    this.query<HTMLButtonElement>("commit").disabled =
      !ready || !state.dirty || state.note.trim() === "";

    this.query("commit-errors").innerHTML = state.commitErrors
      .map((message) => `<li>${escapeHtml(message)}</li>`)
      .join("");

    this.query("history").innerHTML = state.history
      .map(
        (revision) =>
          `<li>r${revision.revision_no} · composite ${revision.composite}` +
          `${revision.note ? ` · ${escapeHtml(revision.note)}` : ""}</li>`,
      )
      .join("");

    this.query("rank-list").innerHTML = state.rank
      .map(
        (entry) =>
          `<li${entry.iu_id === state.iuId ? ' class="self"' : ""}>` +
          `${escapeHtml(entry.iu_id)} — ${entry.composite}</li>`,
      )
      .join("");
  }

  private renderCriteria(state: Readonly<SessionState>, ready: boolean): void {
    const form = this.query("criteria-form");
    const key = state.criteria.map((c) => c.key).join(",");
    if (key && key !== this.criteriaBuiltFor) {
      this.criteriaBuiltFor = key;
      form.innerHTML = state.criteria
        .map(
          (criterion) => `
          <fieldset data-criterion="${criterion.key}">
            <legend>${escapeHtml(criterion.name)}</legend>
            ${criterion.anchors
              .map((anchor, index) => {
                const level = index + 1;
                return `
                <label class="anchor">
                  <input type="radio" name="level-${criterion.key}"
                         data-testid="level-${criterion.key}-${level}"
                         value="${level}" />
                  <b>${level}</b> ${escapeHtml(anchor)}
                </label>`;
              })
              .join("")}
            <textarea data-testid="rationale-${criterion.key}"
                      placeholder="Rationale"></textarea>
          </fieldset>`,
        )
        .join("");

      for (const criterion of state.criteria) {
        for (let level = 1; level <= 5; level += 1) {
          const radio = this.query<HTMLInputElement>(`level-${criterion.key}-${level}`);
          radio.addEventListener("change", () => {
            if (radio.checked) this.session.setLevel(criterion.key, level);
          });
        }
        const rationale = this.query<HTMLTextAreaElement>(`rationale-${criterion.key}`);
        rationale.addEventListener("input", () =>
          this.session.setRationale(criterion.key, rationale.value),
        );
      }
    }

    for (const criterion of state.criteria) {
      const draft = state.draftLevels[criterion.key];
      for (let level = 1; level <= 5; level += 1) {
        const radio = this.query<HTMLInputElement>(`level-${criterion.key}-${level}`);
        radio.checked = level === draft;
        radio.disabled = !ready;
      }
      const rationale = this.query<HTMLTextAreaElement>(`rationale-${criterion.key}`);
      const text = state.draftRationales[criterion.key] ?? "";
      if (document.activeElement !== rationale && rationale.value !== text) {
        rationale.value = text;
      }
      rationale.disabled = !ready;
    }
  }
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

import { ApiClient } from "./api.js";
import { ScoringSession } from "./session.js";
import { ScoringView } from "./view.js";

const apiBase =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";

const api = new ApiClient(apiBase);

async function boot(): Promise<void> {
  const picker = document.getElementById("iu-picker") as HTMLSelectElement;
  const mountPoint = document.getElementById("scoring-view") as HTMLElement;
  const status = document.getElementById("boot-status") as HTMLElement;

  let ius;
  try {
    ius = await api.listIus();
  } catch (error) {
    status.textContent = `Cannot reach the scoring service at ${apiBase}: ${String(
      error,
    )}. Start it with \`tom serve\` and reload.`;
    return;
  }
  status.textContent = ius.length ? "" : "No IUs in the registry yet; add one with `tom add-iu`.";

  picker.innerHTML =
    `<option value="" disabled selected>Pick an IU…</option>` +
    ius
      .map((iu) => `<option value="${iu.id}">${iu.name} (${iu.id})</option>`)
      .join("");

  picker.addEventListener("change", () => {
    const session = new ScoringSession(api);
    new ScoringView(mountPoint, session).mount();
    void session.load(picker.value);
  });
}

void boot();

// Boot: resolve the scheme, create or resume a session, and wire the
// wizard, profile panel, and what-if explorer together.

import { ApiClient, ApiError } from "./api";
import { renderProfilePanel, renderRadarInto } from "./profilePanel";
import { WizardStore } from "./state";
import type { SchemeDoc, SessionDoc, SubjectDoc } from "./types";
import { renderSyncBanner, renderWizard } from "./wizard";
import { renderWhatIf } from "./whatif";

const SESSION_KEY = "crstip.session";
const SCHEME_ID = "crstip";

export async function boot(document: Document, api = new ApiClient("")): Promise<void> {
  const el = (id: string): HTMLElement => {
    const node = document.getElementById(id);
    if (node === null) {
      throw new Error(`missing #${id} in the page`);
    }
    return node;
  };
  const startRoot = el("start");
  const wizardRoot = el("wizard");
  const bannerRoot = el("banner");
  const profileRoot = el("profile");
  const radarRoot = el("radar");
  const whatifRoot = el("whatif");

  let scheme: SchemeDoc;
  try {
    scheme = await api.getScheme(SCHEME_ID);
  } catch (error) {
    startRoot.textContent = `Cannot reach the assessment service: ${String(error)}`;
    return;
  }

  const storedId = window.localStorage.getItem(SESSION_KEY);
  if (storedId !== null) {
    try {
      const session = await api.getSession(storedId);
      runApp(session);
      return;
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        window.localStorage.removeItem(SESSION_KEY);
      } else {
        startRoot.textContent = `Cannot resume the stored session: ${String(error)}`;
        return;
      }
    }
  }
  renderStartForm();

  function renderStartForm(): void {
    startRoot.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = `Start a ${scheme.name} assessment`;
    const nameInput = document.createElement("input");
    nameInput.placeholder = "Subject name";
    nameInput.dataset.testid = "subject-name";
    const kindSelect = document.createElement("select");
    kindSelect.dataset.testid = "subject-kind";
    for (const kind of ["organization", "process", "system"]) {
      const option = document.createElement("option");
      option.value = kind;
      option.textContent = kind;
      kindSelect.appendChild(option);
    }
    const begin = document.createElement("button");
    begin.dataset.testid = "begin";
    begin.textContent = "Begin";
    begin.addEventListener("click", () => {
      const subject: SubjectDoc = {
        name: nameInput.value.trim() || "Unnamed subject",
        kind: kindSelect.value as SubjectDoc["kind"],
        notes: "",
      };
      void api.createSession(SCHEME_ID, subject).then((session) => {
        window.localStorage.setItem(SESSION_KEY, session.id);
        runApp(session);
      });
    });
    startRoot.append(heading, nameInput, kindSelect, begin);
  }

  function runApp(session: SessionDoc): void {
    startRoot.innerHTML = "";
    startRoot.hidden = true;
    const store = WizardStore.fromSession(api, scheme, session);

    let radarToken = 0;
    const redraw = (): void => {
      renderWizard(wizardRoot, store);
      renderSyncBanner(bannerRoot, store);
      renderProfilePanel(profileRoot, scheme, store.profile);
      if (store.profile !== null) {
        const token = ++radarToken;
        void renderRadarInto(radarRoot, api, scheme, store.profile).catch(() => {
          /* chart is decorative; the table above still shows the levels */
        });
        void token;
      }
    };
    store.subscribe(redraw);
    redraw();
    void store.refreshProfile();

    renderWhatIf(whatifRoot, {
      api,
      scheme,
      sessionId: session.id,
      currentProfile: () => store.profile,
      radarContainer: () => radarRoot,
    });
    // re-seed the explorer's defaults once a profile exists
    const unsubscribe = store.subscribe(() => {
      if (store.profile !== null) {
        renderWhatIf(whatifRoot, {
          api,
          scheme,
          sessionId: session.id,
          currentProfile: () => store.profile,
          radarContainer: () => radarRoot,
        });
        unsubscribe();
      }
    });
  }
}

declare global {
  interface Window {
    __crstipBooted?: Promise<void>;
  }
}

// Auto-boot only when the page shell is present (tests import and call
// boot() themselves against a DOM they control).
if (typeof document !== "undefined" && document.getElementById("start") !== null) {
  window.__crstipBooted = boot(document);
}

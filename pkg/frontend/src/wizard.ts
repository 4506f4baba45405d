// The step-by-step questionnaire: one indicator at a time, area by area,
// rank ascending. Every answer saves immediately through the store.

import type { WizardStore } from "./state";
import type { AnswerValue } from "./types";

const CHOICES: Array<{ value: AnswerValue; label: string; key: string }> = [
  { value: "yes", label: "Yes", key: "y" },
  { value: "no", label: "No", key: "n" },
  { value: "unknown", label: "Don't know", key: "u" },
];

export function renderWizard(root: HTMLElement, store: WizardStore): void {
  root.innerHTML = "";

  const progress = document.createElement("p");
  progress.className = "progress";
  progress.dataset.testid = "wizard-progress";

  if (store.done) {
    progress.textContent = `All ${store.total} questions seen.`;
    root.appendChild(progress);
    const doneNote = document.createElement("p");
    doneNote.dataset.testid = "wizard-done";
    const answered = store.answers.size;
    doneNote.textContent =
      answered === store.total
        ? "Questionnaire complete. The profile on the right reflects every answer."
        : `Questionnaire finished with ${store.total - answered} skipped question(s);` +
          " revisit them any time.";
    root.appendChild(doneNote);
    const restart = document.createElement("button");
    restart.textContent = "Review from the start";
    restart.addEventListener("click", () => store.goTo(0));
    root.appendChild(restart);
    return;
  }

  const { area, level, indicator } = store.current;
  progress.textContent = `Question ${store.cursor + 1} of ${store.total}`;
  root.appendChild(progress);

  const heading = document.createElement("h3");
  heading.dataset.testid = "wizard-area";
  heading.textContent = `${area.name} — Level ${level.rank}: ${level.name}`;
  root.appendChild(heading);

  const statement = document.createElement("p");
  statement.className = "statement";
  statement.dataset.testid = "wizard-statement";
  statement.textContent = indicator.statement;
  root.appendChild(statement);

  const existing = store.answers.get(indicator.id);
  const buttons = document.createElement("div");
  buttons.className = "choices";
  for (const choice of CHOICES) {
    const button = document.createElement("button");
    button.dataset.testid = `answer-${choice.value}`;
    button.textContent = existing === choice.value ? `${choice.label} ✓` : choice.label;
    button.addEventListener("click", () => store.answer(choice.value));
    buttons.appendChild(button);
  }
  root.appendChild(buttons);

  const nav = document.createElement("div");
  nav.className = "nav";
  const backButton = document.createElement("button");
  backButton.textContent = "Back";
  backButton.disabled = store.cursor === 0;
  backButton.addEventListener("click", () => store.back());
  const skipButton = document.createElement("button");
  skipButton.dataset.testid = "answer-skip";
  skipButton.textContent = "Skip";
  skipButton.addEventListener("click", () => store.skip());
  nav.appendChild(backButton);
  nav.appendChild(skipButton);
  root.appendChild(nav);
}

export function renderSyncBanner(root: HTMLElement, store: WizardStore): void {
  root.innerHTML = "";
  if (store.syncError === null) {
    root.hidden = true;
    return;
  }
  root.hidden = false;
  const message = document.createElement("span");
  message.dataset.testid = "sync-error";
  message.textContent =
    `Could not save ${store.pending.length} answer(s): ${store.syncError}. ` +
    "They are kept locally.";
  const retry = document.createElement("button");
  retry.dataset.testid = "sync-retry";
  retry.textContent = "Retry";
  retry.addEventListener("click", () => store.retry());
  root.appendChild(message);
  root.appendChild(retry);
}

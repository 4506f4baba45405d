// What-if explorer: pick target levels per area and immediately see the
// prerequisites they pull in, the remaining indicators, and the ordered
// steps. Targets stay client-side; nothing here mutates the session.

import { highlightAxes } from "./profilePanel";
import type { GapReportDoc, ProfileResponse, RoadmapDoc, SchemeDoc } from "./types";

/** The slice of the API the explorer needs; ApiClient satisfies it. */
export interface ExplorerGateway {
  getGaps(sessionId: string, targets: Record<string, number>): Promise<GapReportDoc>;
  getRoadmap(sessionId: string, targets: Record<string, number>): Promise<RoadmapDoc>;
}

export interface WhatIfDeps {
  api: ExplorerGateway;
  scheme: SchemeDoc;
  sessionId: string;
  currentProfile: () => ProfileResponse | null;
  radarContainer: () => HTMLElement | null;
}

export function renderWhatIf(root: HTMLElement, deps: WhatIfDeps): void {
  const { scheme } = deps;
  root.innerHTML = "";

  const intro = document.createElement("p");
  intro.textContent =
    "Choose target levels and explore what they require. Prerequisites in" +
    " other key areas are pulled in automatically.";
  root.appendChild(intro);

  const form = document.createElement("div");
  form.className = "targets";
  const selects = new Map<string, HTMLSelectElement>();
  const profile = deps.currentProfile();
  for (const area of scheme.areas) {
    const label = document.createElement("label");
    label.textContent = area.name;
    const select = document.createElement("select");
    select.dataset.testid = `target-${area.id}`;
    const ranks = [...area.levels.map((level) => level.rank)].sort((a, b) => a - b);
    const current =
      profile?.profile.areas.find((entry) => entry.area === area.id)?.effective_level ?? 1;
    for (const rank of ranks) {
      const option = document.createElement("option");
      option.value = String(rank);
      option.textContent = `Level ${rank}`;
      option.selected = rank === current;
      select.appendChild(option);
    }
    selects.set(area.id, select);
    label.appendChild(select);
    form.appendChild(label);
  }
  root.appendChild(form);

  const explore = document.createElement("button");
  explore.dataset.testid = "explore";
  explore.textContent = "Explore";
  root.appendChild(explore);

  const results = document.createElement("div");
  results.dataset.testid = "whatif-results";
  root.appendChild(results);

  explore.addEventListener("click", () => {
    const targets: Record<string, number> = {};
    for (const [areaId, select] of selects.entries()) {
      targets[areaId] = Number(select.value);
    }
    void exploreTargets(results, deps, targets);
  });
}

async function exploreTargets(
  results: HTMLElement,
  deps: WhatIfDeps,
  targets: Record<string, number>,
): Promise<void> {
  results.innerHTML = "<p>Loading…</p>";
  let gaps: GapReportDoc;
  let roadmap: RoadmapDoc;
  try {
    [gaps, roadmap] = await Promise.all([
      deps.api.getGaps(deps.sessionId, targets),
      deps.api.getRoadmap(deps.sessionId, targets),
    ]);
  } catch (error) {
    results.innerHTML = "";
    const banner = document.createElement("p");
    banner.className = "error";
    banner.dataset.testid = "whatif-error";
    banner.textContent = error instanceof Error ? error.message : String(error);
    results.appendChild(banner);
    return;
  }
  results.innerHTML = "";

  const names = new Map(deps.scheme.areas.map((area) => [area.id, area.name]));

  // areas the closure raised beyond what the user picked: induced prerequisites
  const induced = gaps.areas.filter(
    (entry) =>
      entry.target_rank > (targets[entry.area] ?? 0) &&
      entry.target_rank > entry.current_level,
  );
  const inducedBlock = document.createElement("div");
  inducedBlock.dataset.testid = "induced";
  if (induced.length > 0) {
    const heading = document.createElement("h4");
    heading.textContent = "Induced prerequisites";
    inducedBlock.appendChild(heading);
    const list = document.createElement("ul");
    for (const entry of induced) {
      const item = document.createElement("li");
      item.dataset.testid = `induced-${entry.area}`;
      item.textContent =
        `${names.get(entry.area) ?? entry.area} must reach level ${entry.target_rank}` +
        " before the chosen targets are attainable.";
      list.appendChild(item);
    }
    inducedBlock.appendChild(list);
  }
  results.appendChild(inducedBlock);

  const radar = deps.radarContainer();
  if (radar !== null) {
    highlightAxes(
      radar,
      induced.map((entry) => names.get(entry.area) ?? entry.area),
    );
  }

  const steps = document.createElement("ol");
  steps.dataset.testid = "roadmap-steps";
  for (const step of roadmap.steps) {
    const item = document.createElement("li");
    item.dataset.testid = `step-${step.area}-${step.rank}`;
    const title = document.createElement("strong");
    title.textContent = `${names.get(step.area) ?? step.area} → level ${step.rank}`;
    item.appendChild(title);
    for (const edge of step.prerequisites) {
      const req = document.createElement("p");
      req.className = "edge";
      req.textContent =
        `needs ${names.get(edge.requires.area) ?? edge.requires.area}` +
        ` at level ${edge.requires.rank} — ${edge.rationale}`;
      item.appendChild(req);
    }
    const todo = document.createElement("ul");
    for (const indicator of step.indicators) {
      const entry = document.createElement("li");
      entry.textContent = indicator.statement;
      todo.appendChild(entry);
    }
    item.appendChild(todo);
    steps.appendChild(item);
  }
  const stepsHeading = document.createElement("h4");
  stepsHeading.textContent =
    roadmap.steps.length > 0 ? `Steps (${roadmap.steps.length})` : "Nothing to do";
  results.appendChild(stepsHeading);
  results.appendChild(steps);

  const remaining = gaps.areas.reduce((count, entry) => count + entry.missing.length, 0);
  const summary = document.createElement("p");
  summary.dataset.testid = "gap-summary";
  summary.textContent = `${remaining} indicator(s) still to satisfy.`;
  results.appendChild(summary);
}

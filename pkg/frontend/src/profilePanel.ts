// Live profile view: per-area levels from the server plus the radar chart
// the chart endpoint renders. Levels always come from the API; this panel
// only formats them.

import type { ChartSpecDoc, ProfileResponse, SchemeDoc } from "./types";

/** The slice of the API this panel needs; ApiClient satisfies it. */
export interface ChartGateway {
  renderRadar(spec: ChartSpecDoc): Promise<string>;
}

export function maxRank(scheme: SchemeDoc): number {
  return Math.max(...scheme.areas.map((area) => Math.max(...area.levels.map((l) => l.rank))));
}

export function renderProfilePanel(
  root: HTMLElement,
  scheme: SchemeDoc,
  response: ProfileResponse | null,
): void {
  root.innerHTML = "";
  if (response === null) {
    const note = document.createElement("p");
    note.textContent = "Answer a question to see the profile.";
    root.appendChild(note);
    return;
  }

  const names = new Map(scheme.areas.map((area) => [area.id, area.name]));
  const table = document.createElement("table");
  table.innerHTML =
    "<thead><tr><th>Key area</th><th>Raw</th><th>Effective</th><th>Answered</th></tr></thead>";
  const body = document.createElement("tbody");
  for (const entry of response.profile.areas) {
    const row = document.createElement("tr");
    const name = document.createElement("td");
    name.textContent = names.get(entry.area) ?? entry.area;
    const raw = document.createElement("td");
    raw.dataset.testid = `raw-${entry.area}`;
    raw.textContent = String(entry.raw_level);
    const effective = document.createElement("td");
    effective.dataset.testid = `level-${entry.area}`;
    effective.textContent = String(entry.effective_level);
    const answered = document.createElement("td");
    answered.textContent = `${Math.round(entry.completeness * 100)}%`;
    row.append(name, raw, effective, answered);
    body.appendChild(row);
  }
  table.appendChild(body);
  root.appendChild(table);

  const violations = document.createElement("div");
  violations.dataset.testid = "violations";
  if (response.violations.length > 0) {
    const heading = document.createElement("h4");
    heading.textContent = "Prerequisite violations";
    violations.appendChild(heading);
    const list = document.createElement("ul");
    for (const violation of response.violations) {
      const item = document.createElement("li");
      item.textContent =
        `${names.get(violation.subject.area) ?? violation.subject.area} level` +
        ` ${violation.subject.rank} requires ` +
        `${names.get(violation.requires.area) ?? violation.requires.area} level` +
        ` ${violation.requires.rank} (currently ${violation.observed_rank})`;
      list.appendChild(item);
    }
    violations.appendChild(list);
  }
  root.appendChild(violations);
}

export async function renderRadarInto(
  container: HTMLElement,
  api: ChartGateway,
  scheme: SchemeDoc,
  response: ProfileResponse,
  baseline?: { name: string; values: number[] },
): Promise<void> {
  const series = [
    {
      name: response.profile.subject.name,
      values: response.profile.areas.map((entry) => entry.effective_level),
    },
  ];
  if (baseline) {
    series.push(baseline);
  }
  const svg = await api.renderRadar({
    axes: scheme.areas.map((area) => area.name),
    max_rank: maxRank(scheme),
    series,
  });
  container.innerHTML = svg;
}

/** Emphasize the named axes of an inlined radar SVG. */
export function highlightAxes(container: HTMLElement, areaNames: string[]): void {
  const wanted = new Set(areaNames);
  for (const text of Array.from(container.querySelectorAll("text"))) {
    if (text.textContent !== null && wanted.has(text.textContent)) {
      text.setAttribute("fill", "#c4552d");
      text.setAttribute("font-weight", "bold");
      text.classList.add("axis-highlight");
    }
  }
}

// Wizard state: the cursor over the questionnaire, locally cached answers
// pending sync, and the last profile the server confirmed. Answers drain
// to the PUT endpoint strictly in order; a failed sync keeps the queue and
// surfaces an error instead of dropping anything.

import type {
  AnswerValue,
  AreaDoc,
  IndicatorDoc,
  LevelDoc,
  ProfileResponse,
  SchemeDoc,
  SessionDoc,
} from "./types";

/** The slice of the API the wizard needs; ApiClient satisfies it. */
export interface SessionGateway {
  putAnswer(
    sessionId: string,
    indicatorId: string,
    value: AnswerValue,
    note?: string,
  ): Promise<unknown>;
  getProfile(sessionId: string): Promise<ProfileResponse>;
}

export interface FlatIndicator {
  area: AreaDoc;
  level: LevelDoc;
  indicator: IndicatorDoc;
}

export interface PendingAnswer {
  indicatorId: string;
  value: AnswerValue;
}

export function flattenIndicators(scheme: SchemeDoc): FlatIndicator[] {
  const flat: FlatIndicator[] = [];
  for (const area of scheme.areas) {
    const levels = [...area.levels].sort((a, b) => a.rank - b.rank);
    for (const level of levels) {
      for (const indicator of level.indicators) {
        flat.push({ area, level, indicator });
      }
    }
  }
  return flat;
}

export class WizardStore {
  readonly indicators: FlatIndicator[];
  cursor = 0;
  answers = new Map<string, AnswerValue>();
  pending: PendingAnswer[] = [];
  profile: ProfileResponse | null = null;
  syncError: string | null = null;

  private draining = false;
  private listeners = new Set<() => void>();

  constructor(
    private readonly api: SessionGateway,
    readonly scheme: SchemeDoc,
    readonly sessionId: string,
  ) {
    this.indicators = flattenIndicators(scheme);
  }

  static fromSession(api: SessionGateway, scheme: SchemeDoc, session: SessionDoc): WizardStore {
    const store = new WizardStore(api, scheme, session.id);
    for (const [indicatorId, answer] of Object.entries(session.answers)) {
      store.answers.set(indicatorId, answer.value);
    }
    store.cursor = store.firstUnanswered();
    return store;
  }

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }

  get current(): FlatIndicator {
    return this.indicators[this.cursor];
  }

  get done(): boolean {
    return this.cursor >= this.indicators.length;
  }

  get total(): number {
    return this.indicators.length;
  }

  firstUnanswered(): number {
    const index = this.indicators.findIndex(
      (entry) => !this.answers.has(entry.indicator.id),
    );
    return index === -1 ? this.indicators.length : index;
  }

  goTo(index: number): void {
    this.cursor = Math.max(0, Math.min(index, this.indicators.length));
    this.emit();
  }

  back(): void {
    this.goTo(this.cursor - 1);
  }

  skip(): void {
    this.goTo(this.cursor + 1);
  }

  /** Record an answer at the cursor, advance, and start syncing. */
  answer(value: AnswerValue): void {
    if (this.done) {
      return;
    }
    const indicatorId = this.current.indicator.id;
    this.answers.set(indicatorId, value);
    this.pending = this.pending.filter((entry) => entry.indicatorId !== indicatorId);
    this.pending.push({ indicatorId, value });
    this.cursor += 1;
    this.emit();
    void this.drain();
  }

  /** Push queued answers to the server one at a time, oldest first. */
  async drain(): Promise<void> {
    if (this.draining) {
      return;
    }
    this.draining = true;
    try {
      while (this.pending.length > 0) {
        const head = this.pending[0];
        try {
          await this.api.putAnswer(this.sessionId, head.indicatorId, head.value);
        } catch (error) {
          this.syncError = error instanceof Error ? error.message : String(error);
          this.emit();
          return;
        }
        this.pending.shift();
        this.syncError = null;
      }
      await this.refreshProfile();
    } finally {
      this.draining = false;
    }
    // answers recorded while the profile refresh was in flight
    if (this.pending.length > 0 && this.syncError === null) {
      void this.drain();
    }
  }

  retry(): void {
    this.syncError = null;
    this.emit();
    void this.drain();
  }

  async refreshProfile(): Promise<void> {
    try {
      this.profile = await this.api.getProfile(this.sessionId);
      this.syncError = null;
    } catch (error) {
      this.syncError = error instanceof Error ? error.message : String(error);
    }
    this.emit();
  }
}

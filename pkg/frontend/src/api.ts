// Typed client for the assessment service. Every non-2xx response body is
// a single {status, code, message} object, surfaced here as ApiError.

import type {
  AnswerValue,
  ChartSpecDoc,
  GapReportDoc,
  ProfileResponse,
  RoadmapDoc,
  SchemeDoc,
  SessionDoc,
  SubjectDoc,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "ERROR";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === "string") {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body: keep the HTTP status text
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.base + path, init);
    if (!response.ok) {
      await raiseFor(response);
    }
    return response;
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.request(path, init);
    return (await response.json()) as T;
  }

  private post(body: unknown): RequestInit {
    return {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    };
  }

  getScheme(schemeId: string): Promise<SchemeDoc> {
    return this.json(`/api/schemes/${encodeURIComponent(schemeId)}`);
  }

  createSession(schemeId: string, subject: SubjectDoc): Promise<SessionDoc> {
    return this.json("/api/sessions", this.post({ scheme_id: schemeId, subject }));
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return this.json(`/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  putAnswer(
    sessionId: string,
    indicatorId: string,
    value: AnswerValue,
    note = "",
  ): Promise<unknown> {
    return this.json(
      `/api/sessions/${encodeURIComponent(sessionId)}/answers/${encodeURIComponent(indicatorId)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ value, note }),
      },
    );
  }

  getProfile(sessionId: string): Promise<ProfileResponse> {
    return this.json(`/api/sessions/${encodeURIComponent(sessionId)}/profile`);
  }

  getGaps(sessionId: string, targets: Record<string, number>): Promise<GapReportDoc> {
    return this.json(
      `/api/sessions/${encodeURIComponent(sessionId)}/gaps`,
      this.post({ targets }),
    );
  }

  getRoadmap(sessionId: string, targets: Record<string, number>): Promise<RoadmapDoc> {
    return this.json(
      `/api/sessions/${encodeURIComponent(sessionId)}/roadmap`,
      this.post({ targets }),
    );
  }

  async renderRadar(spec: ChartSpecDoc): Promise<string> {
    const response = await this.request("/api/charts/radar", this.post({ spec }));
    return await response.text();
  }
}

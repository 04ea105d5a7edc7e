/**
 * Typed client for the inspection session service.
 *
 * The console is a pure projection of server state: every decision shown in
 * the UI comes from these responses, never from client-side statistics.
 */

export interface BoundaryRow {
  m: number;
  accept_max_d: number;
  reject_min_d: number;
}

export interface PlanConfig {
  acceptable_rate: number;
  rejectable_rate: number;
  producer_risk: number;
  consumer_risk: number;
}

export interface PlanDoc {
  kind: string;
  config: PlanConfig | null;
  model: { kind: string; lot_size?: number };
  truncation?: { at: number; accept_if_defects_leq: number };
  [key: string]: unknown;
}

export type Verdict = "continue" | "accept" | "reject";

export interface OutcomeEvent {
  type: "outcome";
  seq: number;
  is_defect: boolean;
  idempotency_key?: string | null;
}

export interface AmendmentEvent {
  type: "amendment";
  seq: number;
  corrected_is_defect: boolean;
  reopen?: boolean;
}

export type SessionEvent =
  | OutcomeEvent
  | AmendmentEvent
  | { type: "created"; [key: string]: unknown };

export interface SessionState {
  session_id: string;
  inspected: number;
  defects: number;
  verdict: Verdict;
  verdict_at: number | null;
  max_items: number;
  plan: PlanDoc;
  boundaries?: BoundaryRow[];
  events?: SessionEvent[];
  replayed?: boolean;
  reopened?: boolean;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function asJson(resp: Response): Promise<any> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && body.detail) detail = String(body.detail);
    } catch {
      /* keep the status text */
    }
    throw new ServiceError(resp.status, detail);
  }
  return resp.json();
}

export class SessionApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createSession(body: Record<string, unknown>): Promise<SessionState> {
    const resp = await this.fetchFn(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return asJson(resp);
  }

  async getSession(id: string): Promise<SessionState> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}`));
    return asJson(resp);
  }

  async recordOutcome(
    id: string,
    isDefect: boolean,
    idempotencyKey: string,
    expectedSeq?: number,
  ): Promise<SessionState> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}/outcomes`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        is_defect: isDefect,
        idempotency_key: idempotencyKey,
        expected_seq: expectedSeq ?? null,
      }),
    });
    return asJson(resp);
  }

  async amend(
    id: string,
    sequenceNumber: number,
    correctedIsDefect: boolean,
    reopen = false,
  ): Promise<SessionState> {
    const resp = await this.fetchFn(this.url(`/sessions/${id}/amendments`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        sequence_number: sequenceNumber,
        corrected_is_defect: correctedIsDefect,
        reopen,
      }),
    });
    return asJson(resp);
  }
}

/** Fresh idempotency key per click; retries of the same click reuse it. */
export function newIdempotencyKey(): string {
  if (typeof crypto !== "undefined" && "randomUUID" in crypto) {
    return crypto.randomUUID();
  }
  return `k-${Date.now()}-${Math.random().toString(36).slice(2)}`;
}

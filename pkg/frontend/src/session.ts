/**
 * Client-side view of one inspection session.
 *
 * Holds the inspected path and the verdict exactly as the server reported
 * them. The path is reconstructed from the server's event history (outcomes
 * with amendments applied in order), so a reload shows the identical chart.
 */

import {
  BoundaryRow,
  newIdempotencyKey,
  SessionApi,
  SessionEvent,
  SessionState,
  Verdict,
} from "./api.js";

export interface PathPoint {
  m: number;
  d: number;
}

/** Effective per-item defect flags after replaying amendments in order. */
export function effectiveOutcomes(events: SessionEvent[]): boolean[] {
  const flags: boolean[] = [];
  for (const ev of events) {
    if (ev.type === "outcome") {
      flags.push(ev.is_defect);
    } else if (ev.type === "amendment") {
      if (ev.seq >= 1 && ev.seq <= flags.length) {
        flags[ev.seq - 1] = ev.corrected_is_defect;
      }
    }
  }
  return flags;
}

/** Cumulative (items, defects) path, starting at (0, 0). */
export function pathFromOutcomes(flags: boolean[]): PathPoint[] {
  const path: PathPoint[] = [{ m: 0, d: 0 }];
  let d = 0;
  flags.forEach((flag, i) => {
    if (flag) d += 1;
    path.push({ m: i + 1, d });
  });
  return path;
}

export interface ViewListener {
  (view: SessionView): void;
}

export class SessionView {
  state: SessionState;
  path: PathPoint[];
  /** Boundary geometry is fixed per session; kept across partial responses. */
  boundaries: BoundaryRow[];
  busy = false;
  lastError: string | null = null;
  private listeners: ViewListener[] = [];

  constructor(
    readonly api: SessionApi,
    state: SessionState,
  ) {
    this.state = state;
    this.boundaries = state.boundaries ?? [];
    this.path = pathFromOutcomes(effectiveOutcomes(state.events ?? []));
  }

  static async join(api: SessionApi, sessionId: string): Promise<SessionView> {
    return new SessionView(api, await api.getSession(sessionId));
  }

  static async create(
    api: SessionApi,
    body: Record<string, unknown>,
  ): Promise<SessionView> {
    const created = await api.createSession(body);
    // fetch once more for the event history so every construction path is
    // the same replay
    return SessionView.join(api, created.session_id);
  }

  get verdict(): Verdict {
    return this.state.verdict;
  }

  get finished(): boolean {
    return this.state.verdict !== "continue";
  }

  /** Items that could still be inspected before the forced stop. */
  get remainingAtMost(): number {
    return Math.max(0, this.state.max_items - this.state.inspected);
  }

  onChange(fn: ViewListener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn(this);
  }

  /**
   * Record one inspected item. The path is extended optimistically and then
   * reconciled against the authoritative server response; on failure the
   * optimistic point is rolled back.
   */
  async record(isDefect: boolean): Promise<SessionState> {
    if (this.finished) {
      throw new Error(`session is finished (${this.state.verdict})`);
    }
    if (this.busy) {
      throw new Error("an outcome is already in flight");
    }
    this.busy = true;
    this.lastError = null;
    const prev = this.path[this.path.length - 1];
    const optimistic = { m: prev.m + 1, d: prev.d + (isDefect ? 1 : 0) };
    this.path.push(optimistic);
    this.emit();
    try {
      const state = await this.api.recordOutcome(
        this.state.session_id,
        isDefect,
        newIdempotencyKey(),
        prev.m + 1,
      );
      this.state = state;
      // reconcile: server counts are the truth
      if (state.inspected !== optimistic.m || state.defects !== optimistic.d) {
        await this.resync();
      }
      return this.state;
    } catch (err) {
      this.path.pop(); // roll the optimistic point back
      this.lastError = err instanceof Error ? err.message : String(err);
      await this.resync();
      throw err;
    } finally {
      this.busy = false;
      this.emit();
    }
  }

  /** Correct an earlier item; the server decides what that means. */
  async amend(
    sequenceNumber: number,
    correctedIsDefect: boolean,
    reopen = false,
  ): Promise<SessionState> {
    const state = await this.api.amend(
      this.state.session_id,
      sequenceNumber,
      correctedIsDefect,
      reopen,
    );
    this.state = state;
    await this.resync();
    this.emit();
    return this.state;
  }

  /** Re-fetch state and rebuild the path from the server's event history. */
  async resync(): Promise<void> {
    this.state = await this.api.getSession(this.state.session_id);
    if (this.state.boundaries) this.boundaries = this.state.boundaries;
    this.path = pathFromOutcomes(effectiveOutcomes(this.state.events ?? []));
  }
}

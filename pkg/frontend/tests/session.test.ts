import { describe, expect, it } from "vitest";

import { SessionApi, SessionState } from "../src/api.js";
import {
  effectiveOutcomes,
  pathFromOutcomes,
  SessionView,
} from "../src/session.js";

function baseState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    session_id: "s1",
    inspected: 0,
    defects: 0,
    verdict: "continue",
    verdict_at: null,
    max_items: 20,
    plan: { kind: "sequential", config: null, model: { kind: "without_replacement", lot_size: 100 } },
    boundaries: [],
    events: [{ type: "created" }],
    ...overrides,
  };
}

describe("event replay", () => {
  it("applies amendments in order", () => {
    const flags = effectiveOutcomes([
      { type: "created" },
      { type: "outcome", seq: 1, is_defect: false },
      { type: "outcome", seq: 2, is_defect: true },
      { type: "amendment", seq: 2, corrected_is_defect: false },
      { type: "outcome", seq: 3, is_defect: true },
    ]);
    expect(flags).toEqual([false, false, true]);
  });

  it("builds a cumulative path from (0,0)", () => {
    const path = pathFromOutcomes([false, true, true, false]);
    expect(path).toEqual([
      { m: 0, d: 0 },
      { m: 1, d: 0 },
      { m: 2, d: 1 },
      { m: 3, d: 2 },
      { m: 4, d: 2 },
    ]);
  });

  it("path is stepwise: m advances by one, d never decreases", () => {
    const flags = Array.from({ length: 50 }, (_, i) => i % 7 === 0);
    const path = pathFromOutcomes(flags);
    for (let i = 1; i < path.length; i++) {
      expect(path[i].m).toBe(path[i - 1].m + 1);
      expect(path[i].d).toBeGreaterThanOrEqual(path[i - 1].d);
    }
  });
});

class FakeApi extends SessionApi {
  state: SessionState;
  keys: string[] = [];
  failNext = false;

  constructor(state: SessionState) {
    super("http://fake", (() => {
      throw new Error("no network in FakeApi");
    }) as unknown as typeof fetch);
    this.state = state;
  }

  override async getSession(): Promise<SessionState> {
    return structuredClone(this.state);
  }

  override async recordOutcome(
    _id: string,
    isDefect: boolean,
    key: string,
  ): Promise<SessionState> {
    if (this.failNext) {
      this.failNext = false;
      throw new Error("boom");
    }
    this.keys.push(key);
    this.state.inspected += 1;
    if (isDefect) this.state.defects += 1;
    this.state.events = [
      ...(this.state.events ?? []),
      { type: "outcome", seq: this.state.inspected, is_defect: isDefect },
    ];
    if (this.state.defects >= 3) {
      this.state.verdict = "reject";
      this.state.verdict_at = this.state.inspected;
    }
    return structuredClone(this.state);
  }
}

describe("SessionView", () => {
  it("reconciles optimistic updates against the server", async () => {
    const api = new FakeApi(baseState());
    const view = await SessionView.join(api, "s1");
    await view.record(true);
    await view.record(false);
    expect(view.path[view.path.length - 1]).toEqual({ m: 2, d: 1 });
    expect(view.state.inspected).toBe(2);
  });

  it("uses a fresh idempotency key per click", async () => {
    const api = new FakeApi(baseState());
    const view = await SessionView.join(api, "s1");
    await view.record(false);
    await view.record(false);
    expect(new Set(api.keys).size).toBe(2);
  });

  it("rolls the optimistic point back on failure", async () => {
    const api = new FakeApi(baseState());
    const view = await SessionView.join(api, "s1");
    await view.record(false);
    api.failNext = true;
    await expect(view.record(true)).rejects.toThrow("boom");
    expect(view.path[view.path.length - 1]).toEqual({ m: 1, d: 0 });
    expect(view.lastError).toContain("boom");
  });

  it("locks input once the server verdict is final", async () => {
    const api = new FakeApi(baseState());
    const view = await SessionView.join(api, "s1");
    await view.record(true);
    await view.record(true);
    await view.record(true);
    expect(view.verdict).toBe("reject");
    expect(view.finished).toBe(true);
    await expect(view.record(false)).rejects.toThrow(/finished/);
  });

  it("reports worst-case remaining effort from server counts", async () => {
    const api = new FakeApi(baseState({ max_items: 10 }));
    const view = await SessionView.join(api, "s1");
    await view.record(false);
    expect(view.remainingAtMost).toBe(9);
  });
});

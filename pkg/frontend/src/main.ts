/**
 * Console wiring: join-or-create form, chart, verdict badge, record buttons.
 *
 * URL parameters: ?service=<base-url>&session=<id>. Without a session id the
 * form creates one from a preset. Every verdict shown is the most recent
 * server response; input locks as soon as the server says accept/reject.
 */

import { SessionApi } from "./api.js";
import { renderChart } from "./chart.js";
import { bindKeys } from "./keyboard.js";
import { SessionView } from "./session.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function describePlan(view: SessionView): string {
  const plan = view.state.plan;
  const cfg = plan.config;
  const trunc = plan.truncation;
  const lot = plan.model.lot_size ?? "?";
  const parts = [`lot ${lot}`, `stops by ${view.state.max_items}`];
  if (cfg) {
    parts.unshift(
      `accept @ ${(cfg.acceptable_rate * 100).toFixed(1)}%`,
      `reject @ ${(cfg.rejectable_rate * 100).toFixed(1)}%`,
      `risks ${cfg.producer_risk}/${cfg.consumer_risk}`,
    );
  }
  if (trunc) parts.push(`truncation accepts <= ${trunc.accept_if_defects_leq}`);
  return parts.join(" · ");
}

export function updateDisplay(view: SessionView): void {
  const badge = el<HTMLSpanElement>("verdict");
  badge.textContent = view.verdict.toUpperCase();
  badge.className = `badge badge-${view.verdict}`;
  el<HTMLSpanElement>("counts").textContent =
    `${view.state.inspected} inspected · ${view.state.defects} defects` +
    (view.finished
      ? view.state.verdict_at
        ? ` · decided at item ${view.state.verdict_at}`
        : ""
      : ` · at most ${view.remainingAtMost} to go`);
  el<HTMLSpanElement>("plan-summary").textContent = describePlan(view);
  const err = el<HTMLDivElement>("error");
  err.textContent = view.lastError ?? "";
  err.hidden = !view.lastError;
  for (const id of ["btn-correct", "btn-incorrect"]) {
    el<HTMLButtonElement>(id).disabled = view.finished || view.busy;
  }
  renderChart(
    el<HTMLDivElement>("chart"),
    view.boundaries,
    view.path,
    view.state.max_items,
  );
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const service = params.get("service") ?? window.location.origin;
  const api = new SessionApi(service);
  const form = el<HTMLFormElement>("join-form");
  const consoleBox = el<HTMLDivElement>("console");

  async function mount(view: SessionView): Promise<void> {
    form.hidden = true;
    consoleBox.hidden = false;
    view.onChange(updateDisplay);
    const record = (isDefect: boolean) => {
      if (view.finished || view.busy) return;
      view.record(isDefect).catch(() => undefined); // error surfaces via lastError
    };
    el<HTMLButtonElement>("btn-correct").onclick = () => record(false);
    el<HTMLButtonElement>("btn-incorrect").onclick = () => record(true);
    bindKeys(window, { onCorrect: () => record(false), onIncorrect: () => record(true) },
      () => !view.finished && !view.busy);
    el<HTMLFormElement>("amend-form").onsubmit = (ev) => {
      ev.preventDefault();
      const seq = Number(el<HTMLInputElement>("amend-seq").value);
      const corrected = el<HTMLInputElement>("amend-defect").checked;
      const reopen = el<HTMLInputElement>("amend-reopen").checked;
      view.amend(seq, corrected, reopen).catch(() => undefined);
    };
    const share = new URL(window.location.href);
    share.searchParams.set("session", view.state.session_id);
    share.searchParams.set("service", service);
    el<HTMLAnchorElement>("share-link").href = share.toString();
    el<HTMLSpanElement>("session-id").textContent = view.state.session_id;
    updateDisplay(view);
  }

  const existing = params.get("session");
  if (existing) {
    // joining a finished session degrades to a read-only view
    await mount(await SessionView.join(api, existing));
    return;
  }
  form.hidden = false;
  form.onsubmit = async (ev) => {
    ev.preventDefault();
    const preset = el<HTMLSelectElement>("preset").value;
    const lot = Number(el<HTMLInputElement>("lot-size").value);
    try {
      await mount(await SessionView.create(api, { preset, lot_size: lot }));
    } catch (err) {
      const box = el<HTMLDivElement>("form-error");
      box.textContent = err instanceof Error ? err.message : String(err);
      box.hidden = false;
    }
  };
}

if (typeof document !== "undefined" && document.getElementById("console")) {
  boot().catch((err) => {
    console.error(err);
    const box = document.getElementById("form-error");
    if (box) {
      box.textContent = String(err);
      (box as HTMLDivElement).hidden = false;
    }
  });
}

/**
 * Keyboard bindings: inspection throughput is the point, so recording an
 * outcome must not need the mouse. "c"/"1" = correct, "x"/"2" = incorrect.
 */

export interface KeyboardHandlers {
  onCorrect(): void;
  onIncorrect(): void;
}

export function bindKeys(
  target: { addEventListener: Window["addEventListener"] },
  handlers: KeyboardHandlers,
  enabled: () => boolean,
): (ev: KeyboardEvent) => void {
  const listener = (ev: KeyboardEvent) => {
    if (!enabled()) return;
    const el = ev.target as HTMLElement | null;
    if (el && (el.tagName === "INPUT" || el.tagName === "TEXTAREA")) return;
    switch (ev.key) {
      case "c":
      case "C":
      case "1":
        ev.preventDefault();
        handlers.onCorrect();
        break;
      case "x":
      case "X":
      case "2":
        ev.preventDefault();
        handlers.onIncorrect();
        break;
    }
  };
  target.addEventListener("keydown", listener as EventListener);
  return listener;
}

import { afterEach, describe, expect, it, vi } from "vitest";

import { attachKeyboard, KEY_BINDINGS } from "../src/keyboard.js";

function press(key: string, init: KeyboardEventInit = {}): KeyboardEvent {
  const event = new KeyboardEvent("keydown", {
    key,
    bubbles: true,
    cancelable: true,
    ...init,
  });
  window.dispatchEvent(event);
  return event;
}

describe("attachKeyboard", () => {
  let detach: (() => void) | null = null;

  afterEach(() => {
    detach?.();
    detach = null;
    document.body.innerHTML = "";
  });

  it("dispatches every binding in the table", () => {
    const handler = vi.fn();
    detach = attachKeyboard(window, handler);
    for (const binding of KEY_BINDINGS) {
      const event = press(binding.key);
      expect(handler).toHaveBeenLastCalledWith(binding.action, event);
      expect(event.defaultPrevented).toBe(true);
    }
    expect(handler).toHaveBeenCalledTimes(KEY_BINDINGS.length);
  });

  it("ignores unbound keys and modifier chords", () => {
    const handler = vi.fn();
    detach = attachKeyboard(window, handler);
    press("x");
    press("a", { ctrlKey: true });
    press("j", { metaKey: true });
    press("r", { altKey: true });
    expect(handler).not.toHaveBeenCalled();
  });

  it("never treats typing in a form field as a verdict", () => {
    const handler = vi.fn();
    detach = attachKeyboard(window, handler);
    const input = document.createElement("input");
    document.body.appendChild(input);
    const event = new KeyboardEvent("keydown", {
      key: "a",
      bubbles: true,
      cancelable: true,
    });
    input.dispatchEvent(event);
    expect(handler).not.toHaveBeenCalled();
    expect(event.defaultPrevented).toBe(false);
  });

  it("stops listening once detached", () => {
    const handler = vi.fn();
    const stop = attachKeyboard(window, handler);
    press("a");
    expect(handler).toHaveBeenCalledTimes(1);
    stop();
    press("a");
    expect(handler).toHaveBeenCalledTimes(1);
  });
});

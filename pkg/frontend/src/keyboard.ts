// Keyboard bindings for the review loop. One table, one listener; coders
// keep their hands on the home row.

export const KEY_BINDINGS = [
  { key: "a", action: "accept", description: "accept the focused suggestion" },
  { key: "r", action: "reject", description: "reject the focused suggestion" },
  { key: "g", action: "reassign", description: "reassign via the frame tree" },
  { key: "j", action: "next", description: "move to the next span" },
  { key: "k", action: "previous", description: "move to the previous span" },
  { key: "Escape", action: "dismiss", description: "close the frame tree" },
] as const;

export type KeyAction = (typeof KEY_BINDINGS)[number]["action"];

const FORM_TAGS = new Set(["INPUT", "TEXTAREA", "SELECT"]);

export function attachKeyboard(
  target: EventTarget,
  handler: (action: KeyAction, event: KeyboardEvent) => void,
): () => void {
  const listener = (raw: Event) => {
    const event = raw as KeyboardEvent;
    if (event.metaKey || event.ctrlKey || event.altKey) return;
    const element = event.target as HTMLElement | null;
    if (element && (FORM_TAGS.has(element.tagName) || element.isContentEditable)) {
      return; // typing in a form field is never a verdict
    }
    const binding = KEY_BINDINGS.find((b) => b.key === event.key);
    if (!binding) return;
    event.preventDefault();
    handler(binding.action, event);
  };
  target.addEventListener("keydown", listener);
  return () => target.removeEventListener("keydown", listener);
}

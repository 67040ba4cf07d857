/**
 * Keyboard map for the annotation pane. Single lowercase letters so the
 * bindings work on any layout; all of them are ignored while focus sits in
 * a text input. The table doubles as the data for the on-screen help.
 */

export type ShortcutAction =
  | "split_act"
  | "merge_acts"
  | "new_act"
  | "delete_acts"
  | "reset_alignment"
  | "mark_small_talk"
  | "mark_organizational"
  | "toggle_mode"
  | "clear_selection"
  | "focus_search"
  | "show_help";

export interface ShortcutInfo {
  action: ShortcutAction;
  description: string;
}

export const SHORTCUTS: Record<string, ShortcutInfo> = {
  s: { action: "split_act", description: "Split the selected act at the text cursor" },
  m: { action: "merge_acts", description: "Merge the two selected acts" },
  n: { action: "new_act", description: "Insert a new act after the selection" },
  d: { action: "delete_acts", description: "Delete the selected acts" },
  r: { action: "reset_alignment", description: "Remove the selection's alignment" },
  t: { action: "mark_small_talk", description: "Mark the selection as small talk" },
  o: { action: "mark_organizational", description: "Mark the selection as organizational" },
  e: { action: "toggle_mode", description: "Switch between annotation and evaluation" },
  Escape: { action: "clear_selection", description: "Clear the selection" },
  "/": { action: "focus_search", description: "Jump to the search box" },
  "?": { action: "show_help", description: "Show this overview" },
};

function isTypingContext(target: EventTarget | null): boolean {
  // duck-typed so the resolver also runs headlessly, outside a DOM
  if (target === null || typeof target !== "object") {
    return false;
  }
  const el = target as { tagName?: string; isContentEditable?: boolean };
  if (el.tagName === "INPUT" || el.tagName === "TEXTAREA" || el.tagName === "SELECT") {
    return true;
  }
  return el.isContentEditable === true;
}

/** Action for a key event, or null if the event should pass through. */
export function resolveShortcut(event: {
  key: string;
  ctrlKey: boolean;
  metaKey: boolean;
  altKey: boolean;
  target: EventTarget | null;
}): ShortcutAction | null {
  if (event.ctrlKey || event.metaKey || event.altKey) {
    return null;
  }
  if (isTypingContext(event.target)) {
    return null;
  }
  const info = SHORTCUTS[event.key];
  return info ? info.action : null;
}

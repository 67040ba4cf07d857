import { PairSnapshot } from "./types.js";
import { Viewport, emptyViewport } from "./hunks.js";

export type Mode = "annotation" | "evaluation";

/**
 * Everything the panes need to draw that is not server state: the mode, the
 * current (possibly discontiguous) act selection, and the visible slice of
 * the transcript. The revision mirrors the last snapshot this state was
 * reconciled against.
 */
export interface ViewState {
  mode: Mode;
  transcriptVersion: string;
  summaryVersion: string;
  selection: Set<string>;
  viewport: Viewport;
  revision: number;
}

export function initialViewState(transcriptVersion: string, summaryVersion: string): ViewState {
  return {
    mode: "annotation",
    transcriptVersion,
    summaryVersion,
    selection: new Set(),
    viewport: emptyViewport(),
    revision: 0,
  };
}

/** Switching modes always drops the selection; a half-made gesture must not
 * survive into a context where its meaning would change. */
export function switchMode(state: ViewState, mode: Mode): ViewState {
  if (mode === state.mode) {
    return state;
  }
  return { ...state, mode, selection: new Set() };
}

export function toggleSelected(state: ViewState, daId: string): ViewState {
  const selection = new Set(state.selection);
  if (selection.has(daId)) {
    selection.delete(daId);
  } else {
    selection.add(daId);
  }
  return { ...state, selection };
}

export function clearSelection(state: ViewState): ViewState {
  if (state.selection.size === 0) {
    return state;
  }
  return { ...state, selection: new Set() };
}

export function setViewport(state: ViewState, first: number, last: number): ViewState {
  return { ...state, viewport: { first, last } };
}

/**
 * Reconcile against a fresh snapshot: adopt its revision and drop selected
 * ids that no longer exist (deleted or merged away by another client).
 */
export function reconcile(state: ViewState, snapshot: PairSnapshot): ViewState {
  const existing = new Set(snapshot.transcript.das.map((da) => da.id));
  const selection = new Set([...state.selection].filter((id) => existing.has(id)));
  return { ...state, selection, revision: snapshot.revision };
}

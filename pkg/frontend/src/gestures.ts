import { MetaLabel, MutationOp, PairSnapshot } from "./types.js";
import { ViewState } from "./viewstate.js";

/**
 * Builders that turn pane gestures into mutation ops. Each gesture maps to
 * at most one op; the caller posts the ops through the mutation endpoint
 * and never touches alignment state locally.
 */

function orderedSelection(state: ViewState, snapshot: PairSnapshot): string[] {
  const selected = state.selection;
  return snapshot.transcript.das.map((da) => da.id).filter((id) => selected.has(id));
}

/** Double-click on a summary point: align the whole selection to it. */
export function alignSelectionToPoint(
  state: ViewState,
  snapshot: PairSnapshot,
  pointId: string,
): MutationOp | null {
  const das = orderedSelection(state, snapshot);
  if (das.length === 0) {
    return null;
  }
  return {
    op: "align",
    transcript: state.transcriptVersion,
    summary: state.summaryVersion,
    das,
    target: { point: pointId },
  };
}

/** Mark the selection as small talk or organizational content. */
export function alignSelectionToMeta(
  state: ViewState,
  snapshot: PairSnapshot,
  label: MetaLabel,
): MutationOp | null {
  const das = orderedSelection(state, snapshot);
  if (das.length === 0) {
    return null;
  }
  return {
    op: "align",
    transcript: state.transcriptVersion,
    summary: state.summaryVersion,
    das,
    target: { meta: label },
  };
}

/** Reset gesture: drop whatever alignment the selected acts carry. */
export function unalignSelection(state: ViewState, snapshot: PairSnapshot): MutationOp | null {
  const das = orderedSelection(state, snapshot);
  if (das.length === 0) {
    return null;
  }
  return {
    op: "unalign",
    transcript: state.transcriptVersion,
    summary: state.summaryVersion,
    das,
  };
}

/** Split one selected act at a character offset inside its text. */
export function splitSelectedAct(state: ViewState, offset: number): MutationOp | null {
  if (state.selection.size !== 1) {
    return null;
  }
  const [daId] = state.selection;
  return {
    op: "split",
    transcript: state.transcriptVersion,
    da: daId,
    offset,
  };
}

/** Merge exactly two selected acts; server rejects non-adjacent pairs. */
export function mergeSelectedActs(state: ViewState, snapshot: PairSnapshot): MutationOp | null {
  const das = orderedSelection(state, snapshot);
  if (das.length !== 2) {
    return null;
  }
  return {
    op: "merge",
    transcript: state.transcriptVersion,
    first: das[0],
    second: das[1],
  };
}

/** Insert a fresh act after the last selected one (or at the end). */
export function insertActAfterSelection(
  state: ViewState,
  snapshot: PairSnapshot,
  speaker: string,
): MutationOp {
  const das = orderedSelection(state, snapshot);
  const ids = snapshot.transcript.das.map((da) => da.id);
  const lastSelected = das.length > 0 ? ids.indexOf(das[das.length - 1] as string) : ids.length - 1;
  return {
    op: "insert",
    transcript: state.transcriptVersion,
    position: lastSelected + 1,
    speaker,
    text: "",
  };
}

export function deleteSelectedActs(state: ViewState, snapshot: PairSnapshot): MutationOp[] {
  return orderedSelection(state, snapshot).map((daId) => ({
    op: "delete",
    transcript: state.transcriptVersion,
    da: daId,
  }));
}

/** One score row change in evaluation mode. */
export function setScores(
  state: ViewState,
  annotator: string,
  pointId: string,
  scores: { adequacy?: number | null; grammaticality?: number | null; fluency?: number | null },
): MutationOp {
  return {
    op: "set_scores",
    transcript: state.transcriptVersion,
    summary: state.summaryVersion,
    annotator,
    point: pointId,
    ...scores,
  };
}

export function setDocAdequacy(
  state: ViewState,
  annotator: string,
  value: number | null,
): MutationOp {
  return {
    op: "set_doc_adequacy",
    transcript: state.transcriptVersion,
    summary: state.summaryVersion,
    annotator,
    value,
  };
}

/** Player position for a dialogue act, or null when it has no timestamp. */
export function seekPosition(snapshot: PairSnapshot, daId: string): number | null {
  const da = snapshot.transcript.das.find((candidate) => candidate.id === daId);
  if (!da || da.start === null) {
    return null;
  }
  return da.start;
}

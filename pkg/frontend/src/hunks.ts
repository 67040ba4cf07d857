import { AlignmentView, PairSnapshot, isPointTarget } from "./types.js";

/**
 * Visible slice of the transcript pane as inclusive dialogue-act indices.
 * first > last encodes an empty viewport (e.g. an empty transcript).
 */
export interface Viewport {
  first: number;
  last: number;
}

export function emptyViewport(): Viewport {
  return { first: 0, last: -1 };
}

/** Dialogue-act ids aligned to each summary point, in transcript order. */
export function hunksByPoint(snapshot: PairSnapshot): Map<string, string[]> {
  const hunks = new Map<string, string[]>();
  const targets = snapshot.alignment.targets;
  for (const da of snapshot.transcript.das) {
    const target = targets[da.id];
    if (target !== undefined && isPointTarget(target)) {
      const hunk = hunks.get(target.point);
      if (hunk) {
        hunk.push(da.id);
      } else {
        hunks.set(target.point, [da.id]);
      }
    }
  }
  return hunks;
}

/** The hunk of one summary point (empty when nothing is aligned to it). */
export function hunkOf(snapshot: PairSnapshot, pointId: string): string[] {
  return hunksByPoint(snapshot).get(pointId) ?? [];
}

/** Does any act of the hunk sit inside the viewport? */
export function hunkIntersectsViewport(
  hunk: string[],
  indexById: Map<string, number>,
  viewport: Viewport,
): boolean {
  for (const daId of hunk) {
    const index = indexById.get(daId);
    if (index !== undefined && index >= viewport.first && index <= viewport.last) {
      return true;
    }
  }
  return false;
}

export function transcriptIndex(snapshot: PairSnapshot): Map<string, number> {
  const indexById = new Map<string, number>();
  snapshot.transcript.das.forEach((da, i) => indexById.set(da.id, i));
  return indexById;
}

/** Meta label carried by a dialogue act, if any. */
export function metaLabelOf(alignment: AlignmentView, daId: string): string | null {
  const target = alignment.targets[daId];
  if (target !== undefined && !isPointTarget(target)) {
    return target.meta;
  }
  return null;
}

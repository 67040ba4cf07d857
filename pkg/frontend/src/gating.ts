import { PairSnapshot } from "./types.js";
import { Viewport, hunkIntersectsViewport, hunksByPoint, transcriptIndex } from "./hunks.js";

/**
 * Which summary points may be scored right now: exactly those with a
 * non-empty hunk that intersects the visible viewport. The annotator must
 * be able to see at least part of the evidence before rating a point.
 *
 * The document-level adequacy control is deliberately not governed here;
 * it is always enabled while in evaluation mode.
 */
export function evaluationGate(snapshot: PairSnapshot, viewport: Viewport): Set<string> {
  const scorable = new Set<string>();
  const hunks = hunksByPoint(snapshot);
  const indexById = transcriptIndex(snapshot);
  for (const point of snapshot.summary.points) {
    const hunk = hunks.get(point.id);
    if (hunk && hunk.length > 0 && hunkIntersectsViewport(hunk, indexById, viewport)) {
      scorable.add(point.id);
    }
  }
  return scorable;
}

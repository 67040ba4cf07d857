import { PairSnapshot } from "./types.js";
import { Viewport, hunkIntersectsViewport, hunksByPoint, transcriptIndex } from "./hunks.js";

/**
 * Fixed palette for summary points and their hunks, drawn from Paul Tol's
 * colour-blind-safe qualitative schemes. Order matters: a point's colour is
 * palette[display index mod 12], so the assignment is stable across renders
 * and any two neighbouring points differ.
 */
export const PALETTE: readonly string[] = [
  "#4477aa",
  "#ee6677",
  "#228833",
  "#ccbb44",
  "#66ccee",
  "#aa3377",
  "#bbbbbb",
  "#222255",
  "#225555",
  "#997700",
  "#dd7788",
  "#44aa88",
];

export function colorForIndex(displayIndex: number): string {
  const color = PALETTE[displayIndex % PALETTE.length];
  if (color === undefined) {
    throw new Error(`no palette entry for index ${displayIndex}`);
  }
  return color;
}

/**
 * Colours for the summary pane: point id -> colour, restricted to points
 * whose hunk is at least partly scrolled into view. Everything else stays
 * uncoloured so the eye is only drawn to alignments it can actually see.
 */
export function visiblePointColors(
  snapshot: PairSnapshot,
  viewport: Viewport,
): Map<string, string> {
  const colors = new Map<string, string>();
  const hunks = hunksByPoint(snapshot);
  const indexById = transcriptIndex(snapshot);
  snapshot.summary.points.forEach((point, displayIndex) => {
    const hunk = hunks.get(point.id);
    if (hunk && hunkIntersectsViewport(hunk, indexById, viewport)) {
      colors.set(point.id, colorForIndex(displayIndex));
    }
  });
  return colors;
}

/**
 * Colours for the transcript pane: dialogue act id -> the colour of the
 * point its hunk belongs to. Acts on meta labels or unaligned stay plain.
 */
export function actColors(snapshot: PairSnapshot): Map<string, string> {
  const colors = new Map<string, string>();
  const pointIndex = new Map<string, number>();
  snapshot.summary.points.forEach((point, i) => pointIndex.set(point.id, i));
  for (const [daId, target] of Object.entries(snapshot.alignment.targets)) {
    if ("point" in target) {
      const index = pointIndex.get(target.point);
      if (index !== undefined) {
        colors.set(daId, colorForIndex(index));
      }
    }
  }
  return colors;
}

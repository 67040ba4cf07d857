import { PairSnapshot, Target } from "../src/types.js";

/** Small deterministic RNG so property-style tests are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randInt(rng: () => number, low: number, high: number): number {
  return low + Math.floor(rng() * (high - low + 1));
}

export interface SnapshotSpec {
  nActs: number;
  nPoints: number;
  targets?: Record<string, Target>;
  revision?: number;
}

/**
 * Snapshot with acts d1..dN (0.5s apart) and points p1..pM. Targets default
 * to empty; pass a map to pre-align acts.
 */
export function makeSnapshot(spec: SnapshotSpec): PairSnapshot {
  const das = [];
  for (let i = 0; i < spec.nActs; i += 1) {
    das.push({
      id: `d${i + 1}`,
      speaker: i % 2 === 0 ? "A" : "B",
      text: `utterance ${i}`,
      start: i * 0.5,
      end: i * 0.5 + 0.4,
    });
  }
  const points = [];
  for (let i = 0; i < spec.nPoints; i += 1) {
    points.push({ id: `p${i + 1}`, text: `point ${i}`, indent: i % 3 === 0 ? 0 : 1 });
  }
  return {
    meeting: "m1",
    revision: spec.revision ?? 0,
    transcript: { name: "t1", das },
    summary: { name: "s1", indent_symbol: "-", points },
    alignment: {
      transcript_version: "t1",
      summary_version: "s1",
      annotator: null,
      targets: { ...(spec.targets ?? {}) },
    },
    evaluation: null,
  };
}

import { describe, expect, it } from "vitest";

import {
  clearSelection,
  initialViewState,
  reconcile,
  setViewport,
  switchMode,
  toggleSelected,
} from "../src/viewstate.js";
import { makeSnapshot } from "./fixtures.js";

describe("view state", () => {
  it("starts in annotation mode with nothing selected", () => {
    const state = initialViewState("t1", "s1");
    expect(state.mode).toBe("annotation");
    expect(state.selection.size).toBe(0);
    expect(state.viewport.first).toBeGreaterThan(state.viewport.last);
  });

  it("toggles act selection on and off", () => {
    let state = initialViewState("t1", "s1");
    state = toggleSelected(state, "d1");
    state = toggleSelected(state, "d2");
    expect([...state.selection].sort()).toEqual(["d1", "d2"]);
    state = toggleSelected(state, "d1");
    expect([...state.selection]).toEqual(["d2"]);
  });

  it("drops the selection when the mode changes", () => {
    let state = initialViewState("t1", "s1");
    state = toggleSelected(state, "d1");
    state = switchMode(state, "evaluation");
    expect(state.mode).toBe("evaluation");
    expect(state.selection.size).toBe(0);
  });

  it("keeps the selection when the mode does not change", () => {
    let state = initialViewState("t1", "s1");
    state = toggleSelected(state, "d1");
    const same = switchMode(state, "annotation");
    expect(same.selection.has("d1")).toBe(true);
  });

  it("clears the selection without touching anything else", () => {
    let state = initialViewState("t1", "s1");
    state = setViewport(toggleSelected(state, "d1"), 2, 5);
    state = clearSelection(state);
    expect(state.selection.size).toBe(0);
    expect(state.viewport).toEqual({ first: 2, last: 5 });
  });

  it("reconcile adopts the snapshot revision and drops dead ids", () => {
    let state = initialViewState("t1", "s1");
    state = toggleSelected(toggleSelected(state, "d2"), "d9");
    const snapshot = makeSnapshot({ nActs: 3, nPoints: 1, revision: 17 });
    state = reconcile(state, snapshot);
    expect(state.revision).toBe(17);
    expect([...state.selection]).toEqual(["d2"]);
  });

  it("does not mutate the previous state", () => {
    const before = initialViewState("t1", "s1");
    toggleSelected(before, "d1");
    switchMode(before, "evaluation");
    expect(before.selection.size).toBe(0);
    expect(before.mode).toBe("annotation");
  });
});

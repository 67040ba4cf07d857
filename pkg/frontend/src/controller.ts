import { ApiClient } from "./client.js";
import {
  alignSelectionToMeta,
  alignSelectionToPoint,
  deleteSelectedActs,
  insertActAfterSelection,
  mergeSelectedActs,
  setDocAdequacy,
  setScores,
  splitSelectedAct,
  unalignSelection,
} from "./gestures.js";
import { MetaLabel, MutationOp, PairSnapshot } from "./types.js";
import {
  Mode,
  ViewState,
  clearSelection,
  initialViewState,
  reconcile,
  setViewport,
  switchMode,
  toggleSelected,
} from "./viewstate.js";

/**
 * Session over one transcript/summary pair. Holds the latest snapshot and
 * the view state, funnels every gesture through the mutation endpoint, and
 * reconciles after each acknowledgement so local state never drifts from
 * the server's. Rendering subscribes via onChange.
 */
export class PairController {
  private snapshotValue: PairSnapshot | null = null;
  private stateValue: ViewState;
  private listeners: Array<() => void> = [];

  constructor(
    private readonly client: ApiClient,
    transcriptVersion: string,
    summaryVersion: string,
    private readonly annotator?: string,
  ) {
    this.stateValue = initialViewState(transcriptVersion, summaryVersion);
  }

  get snapshot(): PairSnapshot {
    if (this.snapshotValue === null) {
      throw new Error("controller not loaded yet");
    }
    return this.snapshotValue;
  }

  get state(): ViewState {
    return this.stateValue;
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  async load(): Promise<void> {
    const snapshot = await this.client.fetchView(
      this.stateValue.transcriptVersion,
      this.stateValue.summaryVersion,
      this.annotator,
    );
    this.adopt(snapshot);
  }

  toggleSelect(daId: string): void {
    this.update(toggleSelected(this.stateValue, daId));
  }

  clearSelection(): void {
    this.update(clearSelection(this.stateValue));
  }

  setMode(mode: Mode): void {
    this.update(switchMode(this.stateValue, mode));
  }

  scrollTo(first: number, last: number): void {
    this.update(setViewport(this.stateValue, first, last));
  }

  /** Double-click on a summary point in annotation mode. */
  async alignToPoint(pointId: string): Promise<void> {
    await this.submitOne(alignSelectionToPoint(this.stateValue, this.snapshot, pointId));
  }

  async alignToMeta(label: MetaLabel): Promise<void> {
    await this.submitOne(alignSelectionToMeta(this.stateValue, this.snapshot, label));
  }

  async resetAlignment(): Promise<void> {
    await this.submitOne(unalignSelection(this.stateValue, this.snapshot));
  }

  async splitAt(offset: number): Promise<void> {
    await this.submitOne(splitSelectedAct(this.stateValue, offset));
  }

  async mergeSelected(): Promise<void> {
    await this.submitOne(mergeSelectedActs(this.stateValue, this.snapshot));
  }

  async insertAct(speaker: string): Promise<void> {
    await this.submitOne(insertActAfterSelection(this.stateValue, this.snapshot, speaker));
  }

  async deleteSelected(): Promise<void> {
    await this.submit(deleteSelectedActs(this.stateValue, this.snapshot));
  }

  async scorePoint(
    pointId: string,
    scores: { adequacy?: number | null; grammaticality?: number | null; fluency?: number | null },
  ): Promise<void> {
    if (this.annotator === undefined) {
      throw new Error("scoring requires an annotator name");
    }
    await this.submitOne(setScores(this.stateValue, this.annotator, pointId, scores));
  }

  async scoreDocument(value: number | null): Promise<void> {
    if (this.annotator === undefined) {
      throw new Error("scoring requires an annotator name");
    }
    await this.submitOne(setDocAdequacy(this.stateValue, this.annotator, value));
  }

  private async submitOne(op: MutationOp | null): Promise<void> {
    if (op === null) {
      return;
    }
    await this.submit([op]);
  }

  private async submit(ops: MutationOp[]): Promise<void> {
    if (ops.length === 0) {
      return;
    }
    const outcome = await this.client.mutate(
      this.stateValue.transcriptVersion,
      this.stateValue.summaryVersion,
      this.stateValue.revision,
      ops,
      this.annotator,
    );
    this.adopt(outcome.snapshot);
  }

  private adopt(snapshot: PairSnapshot): void {
    this.snapshotValue = snapshot;
    this.update(reconcile(this.stateValue, snapshot));
  }

  private update(state: ViewState): void {
    this.stateValue = state;
    for (const listener of this.listeners) {
      listener();
    }
  }
}

import { ApiClient } from "./client.js";
import { actColors, visiblePointColors } from "./colors.js";
import { PairController } from "./controller.js";
import { evaluationGate } from "./gating.js";
import { seekPosition } from "./gestures.js";
import { metaLabelOf } from "./hunks.js";
import { resolveShortcut, SHORTCUTS } from "./shortcuts.js";
import { DialogueAct, SummaryPoint } from "./types.js";

const CRITERIA = ["adequacy", "grammaticality", "fluency"] as const;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function formatTime(seconds: number): string {
  const m = Math.floor(seconds / 60);
  const s = Math.floor(seconds % 60);
  return `${m}:${s.toString().padStart(2, "0")}`;
}

export class App {
  private readonly transcriptPane: HTMLElement;
  private readonly summaryPane: HTMLElement;
  private readonly statusBar: HTMLElement;
  private readonly player: HTMLAudioElement;
  private actRows: HTMLElement[] = [];
  private hasMedia = true;

  constructor(
    private readonly controller: PairController,
    private readonly client: ApiClient,
    private readonly root: HTMLElement,
  ) {
    this.transcriptPane = el("section", "transcript-pane");
    this.summaryPane = el("section", "summary-pane");
    this.statusBar = el("footer", "status-bar");
    this.player = el("audio");
    this.player.controls = true;
    this.player.preload = "metadata";
    this.player.src = client.mediaUrl();
    // meetings without a recording 404 here; drop the player instead
    this.player.addEventListener("error", () => {
      this.hasMedia = false;
      this.player.remove();
    });
    controller.onChange(() => this.render());
  }

  mount(): void {
    const header = el("header", "top-bar");
    const modeButton = el("button", "mode-toggle", "Evaluation mode");
    modeButton.addEventListener("click", () => this.toggleMode(modeButton));
    const search = el("input", "search-box") as HTMLInputElement;
    search.type = "search";
    search.placeholder = "Search transcript (regex)";
    search.addEventListener("keydown", (event) => {
      if (event.key === "Enter") {
        void this.searchTranscript(search.value);
      }
    });
    header.append(modeButton, search, this.problemList(), this.helpButton());
    const panes = el("main", "panes");
    panes.append(this.transcriptPane, this.summaryPane);
    this.root.append(header, panes, this.statusBar);

    this.transcriptPane.addEventListener("scroll", () => this.updateViewport());
    document.addEventListener("keydown", (event) => this.onKey(event));
    this.render();
  }

  private toggleMode(button: HTMLElement): void {
    const next = this.controller.state.mode === "annotation" ? "evaluation" : "annotation";
    this.controller.setMode(next);
    button.textContent = next === "annotation" ? "Evaluation mode" : "Annotation mode";
  }

  /** Meta labels for content that belongs to no summary point. */
  private problemList(): HTMLElement {
    const box = el("span", "problem-list");
    for (const label of ["small_talk", "organizational"] as const) {
      const button = el("button", "problem", label.replace("_", " "));
      button.addEventListener("click", () => {
        this.controller.alignToMeta(label).catch((error: unknown) => this.showError(error));
      });
      box.appendChild(button);
    }
    return box;
  }

  private helpButton(): HTMLElement {
    const button = el("button", "help-button", "?");
    button.title = Object.entries(SHORTCUTS)
      .map(([key, info]) => `${key}  ${info.description}`)
      .join("\n");
    return button;
  }

  private onKey(event: KeyboardEvent): void {
    const action = resolveShortcut(event);
    if (action === null) {
      return;
    }
    event.preventDefault();
    const run = (promise: Promise<void>) =>
      promise.catch((error: unknown) => this.showError(error));
    switch (action) {
      case "split_act": {
        const offset = this.caretOffsetInSelectedAct();
        if (offset !== null) {
          run(this.controller.splitAt(offset));
        }
        break;
      }
      case "merge_acts":
        run(this.controller.mergeSelected());
        break;
      case "new_act":
        run(this.controller.insertAct("?"));
        break;
      case "delete_acts":
        run(this.controller.deleteSelected());
        break;
      case "reset_alignment":
        run(this.controller.resetAlignment());
        break;
      case "mark_small_talk":
        run(this.controller.alignToMeta("small_talk"));
        break;
      case "mark_organizational":
        run(this.controller.alignToMeta("organizational"));
        break;
      case "toggle_mode": {
        const button = this.root.querySelector<HTMLElement>(".mode-toggle");
        if (button) {
          this.toggleMode(button);
        }
        break;
      }
      case "clear_selection":
        this.controller.clearSelection();
        break;
      case "focus_search":
        this.root.querySelector<HTMLInputElement>(".search-box")?.focus();
        break;
      case "show_help":
        alert(this.root.querySelector<HTMLElement>(".help-button")?.title ?? "");
        break;
    }
  }

  private caretOffsetInSelectedAct(): number | null {
    const selection = window.getSelection();
    if (!selection || selection.rangeCount === 0) {
      return null;
    }
    return selection.getRangeAt(0).startOffset;
  }

  /** Ask the service for matches; its regex dialect is authoritative. */
  private async searchTranscript(pattern: string): Promise<void> {
    if (pattern === "") {
      return;
    }
    let matched: Set<string>;
    try {
      const result = await this.client.search(
        this.controller.state.transcriptVersion,
        pattern,
      );
      matched = new Set(result.matches.map((match) => match.da));
    } catch (error) {
      this.showError(error);
      return;
    }
    if (matched.size === 0) {
      this.statusBar.textContent = "no match";
      return;
    }
    // next match after the current viewport, wrapping around
    const das = this.controller.snapshot.transcript.das;
    const current = this.controller.state.viewport.first;
    for (let step = 1; step <= das.length; step += 1) {
      const index = (current + step) % das.length;
      const da = das[index];
      if (da && matched.has(da.id)) {
        this.actRows[index]?.scrollIntoView({ block: "center" });
        this.statusBar.textContent = `match at act ${index + 1} of ${das.length}`;
        return;
      }
    }
  }

  private updateViewport(): void {
    const pane = this.transcriptPane;
    const paneTop = pane.scrollTop;
    const paneBottom = paneTop + pane.clientHeight;
    let first = Number.POSITIVE_INFINITY;
    let last = -1;
    this.actRows.forEach((row, index) => {
      const top = row.offsetTop - pane.offsetTop;
      const bottom = top + row.offsetHeight;
      if (bottom > paneTop && top < paneBottom) {
        first = Math.min(first, index);
        last = Math.max(last, index);
      }
    });
    if (last === -1) {
      this.controller.scrollTo(0, -1);
    } else {
      this.controller.scrollTo(first, last);
    }
  }

  private render(): void {
    this.renderTranscript();
    this.renderSummary();
    const { revision, mode, selection } = this.controller.state;
    this.statusBar.textContent =
      `revision ${revision} | ${mode} | ${selection.size} selected`;
  }

  private renderTranscript(): void {
    const snapshot = this.controller.snapshot;
    const colors = actColors(snapshot);
    const selection = this.controller.state.selection;
    this.transcriptPane.replaceChildren();
    this.actRows = snapshot.transcript.das.map((da) => {
      const row = this.actRow(da, colors.get(da.id), selection.has(da.id));
      this.transcriptPane.appendChild(row);
      return row;
    });
  }

  private actRow(da: DialogueAct, color: string | undefined, selected: boolean): HTMLElement {
    const row = el("div", selected ? "act selected" : "act");
    if (color !== undefined) {
      row.style.backgroundColor = color;
    }
    const meta = metaLabelOf(this.controller.snapshot.alignment, da.id);
    if (meta !== null) {
      row.classList.add(`meta-${meta}`);
    }
    const speaker = el("span", "speaker", da.speaker);
    const text = el("span", "text", da.text);
    const time = el("span", "time", da.start !== null ? formatTime(da.start) : "");
    row.append(speaker, text, time);
    row.addEventListener("click", () => this.controller.toggleSelect(da.id));
    row.addEventListener("dblclick", () => {
      const position = seekPosition(this.controller.snapshot, da.id);
      if (position === null) {
        this.statusBar.textContent = "act has no timestamp";
      } else {
        this.player.currentTime = position;
        void this.player.play().catch(() => undefined);
      }
    });
    return row;
  }

  private renderSummary(): void {
    const snapshot = this.controller.snapshot;
    const view = this.controller.state;
    const colors = visiblePointColors(snapshot, view.viewport);
    const scorable =
      view.mode === "evaluation" ? evaluationGate(snapshot, view.viewport) : new Set<string>();
    this.summaryPane.replaceChildren();
    if (this.hasMedia) {
      this.summaryPane.appendChild(this.player);
    }
    for (const point of snapshot.summary.points) {
      this.summaryPane.appendChild(
        this.pointRow(point, colors.get(point.id), scorable.has(point.id)),
      );
    }
    if (view.mode === "evaluation") {
      this.summaryPane.appendChild(this.docAdequacyRow());
      this.summaryPane.appendChild(this.problemFlags());
    }
  }

  /** Acts excluded from the minutes, grouped by meta label. */
  private problemFlags(): HTMLElement {
    const box = el("div", "problem-flags");
    const byLabel = new Map<string, number>();
    for (const da of this.controller.snapshot.transcript.das) {
      const label = metaLabelOf(this.controller.snapshot.alignment, da.id);
      if (label !== null) {
        byLabel.set(label, (byLabel.get(label) ?? 0) + 1);
      }
    }
    const parts = [...byLabel.entries()].map(
      ([label, count]) => `${label.replace("_", " ")}: ${count}`,
    );
    box.textContent = parts.length > 0 ? `flagged acts - ${parts.join(", ")}` : "no flagged acts";
    return box;
  }

  private pointRow(point: SummaryPoint, color: string | undefined, scorable: boolean): HTMLElement {
    const row = el("div", "point");
    row.style.paddingLeft = `${point.indent * 1.5}em`;
    if (color !== undefined) {
      row.style.backgroundColor = color;
    }
    row.appendChild(el("span", "point-text", point.text));
    if (this.controller.state.mode === "annotation") {
      row.addEventListener("dblclick", () => {
        this.controller.alignToPoint(point.id).catch((error: unknown) => this.showError(error));
      });
    } else {
      row.appendChild(this.scoreRows(point.id, scorable));
    }
    return row;
  }

  private scoreRows(pointId: string, enabled: boolean): HTMLElement {
    const box = el("div", "scores");
    const stored = this.controller.snapshot.evaluation?.per_point[pointId];
    for (const criterion of CRITERIA) {
      const line = el("div", "score-line");
      line.appendChild(el("span", "criterion", criterion));
      const current = stored ? stored[criterion] : null;
      for (let value = 1; value <= 5; value += 1) {
        const star = el("button", "star", value <= (current ?? 0) ? "★" : "☆");
        star.disabled = !enabled;
        star.addEventListener("click", () => {
          const patch: { adequacy?: number; grammaticality?: number; fluency?: number } = {};
          patch[criterion] = value;
          this.controller.scorePoint(pointId, patch).catch((error: unknown) => this.showError(error));
        });
        line.appendChild(star);
      }
      box.appendChild(line);
    }
    return box;
  }

  private docAdequacyRow(): HTMLElement {
    const row = el("div", "doc-adequacy");
    row.appendChild(el("span", "criterion", "Document adequacy"));
    const current = this.controller.snapshot.evaluation?.doc_adequacy ?? null;
    for (let value = 1; value <= 5; value += 1) {
      const star = el("button", "star", value <= (current ?? 0) ? "★" : "☆");
      star.addEventListener("click", () => {
        this.controller.scoreDocument(value).catch((error: unknown) => this.showError(error));
      });
      row.appendChild(star);
    }
    return row;
  }

  private showError(error: unknown): void {
    this.statusBar.textContent = error instanceof Error ? error.message : String(error);
  }
}

export async function start(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const meeting = params.get("meeting") ?? "";
  const transcript = params.get("t") ?? "default";
  const summary = params.get("s") ?? "default";
  const annotator = params.get("annotator") ?? undefined;
  const base = params.get("api") ?? "";
  if (meeting === "") {
    document.body.textContent = "missing ?meeting= query parameter";
    return;
  }
  const client = new ApiClient(base, meeting);
  const controller = new PairController(client, transcript, summary, annotator);
  await controller.load();
  const app = new App(controller, client, document.getElementById("app") ?? document.body);
  app.mount();
}

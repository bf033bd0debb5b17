// User-interaction workflow: every action calls the service and folds the
// response into the store. Constraint failures become actionable prompts,
// not dead ends.

import { ApiClient, ServiceError } from "./api.js";
import type { MeshDocument, RootChoice } from "./api.js";
import {
  applyAnalysis,
  applyCommit,
  applyPreview,
  applyServerState,
  applyServiceError,
  applyUndo,
  selectFace,
  Store,
} from "./state.js";

export class UiWorkflow {
  constructor(
    readonly api: ApiClient,
    readonly store: Store,
    private sessionId: string | null = null,
  ) {}

  get session(): string {
    if (!this.sessionId) throw new Error("no session loaded");
    return this.sessionId;
  }

  private pendingAsStrings(): Record<string, number> {
    const out: Record<string, number> = {};
    for (const [edge, length] of
         Object.entries(this.store.get().pendingFixedEdges)) {
      out[edge] = length;
    }
    return out;
  }

  private async guard<T>(action: () => Promise<T>): Promise<T | null> {
    try {
      return await action();
    } catch (error) {
      if (error instanceof ServiceError) {
        this.store.update((s) => applyServiceError(s, error));
        return null;
      }
      throw error;
    }
  }

  async loadModel(model: MeshDocument): Promise<void> {
    await this.guard(async () => {
      this.sessionId = await this.api.createSession(model);
      const state = await this.api.getState(this.sessionId);
      this.store.update((s) => applyServerState(s, state));
    });
  }

  async refresh(): Promise<void> {
    await this.guard(async () => {
      const state = await this.api.getState(this.session);
      this.store.update((s) => applyServerState(s, state));
    });
  }

  /** Face pick: immediately analyze so the CGDoF feedback is live. */
  async pickFace(face: number): Promise<void> {
    this.store.update((s) => selectFace(s, face));
    await this.analyzeSelected();
  }

  async analyzeSelected(): Promise<void> {
    const face = this.store.get().selectedFace;
    if (face === null) return;
    await this.guard(async () => {
      const analysis = await this.api.analyze(
        this.session, face, this.pendingAsStrings());
      this.store.update((s) => applyAnalysis(s, analysis));
    });
  }

  async previewTarget(): Promise<void> {
    const state = this.store.get();
    const face = state.selectedFace;
    if (face === null || state.targetArea === null) return;
    await this.guard(async () => {
      const result = await this.api.preview(
        this.session, face, this.pendingAsStrings(), state.targetArea!);
      this.store.update((s) => applyPreview(s, face, result));
    });
  }

  async commitChosenRoot(choice?: RootChoice): Promise<void> {
    const state = this.store.get();
    const face = state.selectedFace;
    if (face === null || state.targetArea === null) return;
    await this.guard(async () => {
      const next = await this.api.commit(this.session, face, {
        fixed_edges: this.pendingAsStrings(),
        target_area: state.targetArea!,
        root: choice ?? state.rootChoice,
        preview_id: state.preview?.previewId,
      });
      this.store.update((s) => applyCommit(s, next));
    });
  }

  async undo(): Promise<void> {
    await this.guard(async () => {
      const restored = await this.api.undo(this.session);
      this.store.update((s) => applyUndo(s, restored));
    });
  }
}

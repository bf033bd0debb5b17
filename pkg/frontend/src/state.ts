// View state and its pure transitions. Geometry is server-authoritative:
// reducers only store what the service returned, never recompute it.

import type {
  Analysis,
  PreviewResult,
  RootChoice,
  ServiceError,
  SessionState,
  Vec3,
} from "./api.js";

export interface ViewToggles {
  showNormals: boolean;
  dimZeroForce: boolean;
}

export interface GhostOverlay {
  root: number;
  vertices: Vec3[];
}

export interface PreviewState {
  faceIndex: number;
  roots: number[];
  overlays: GhostOverlay[];
  previewId: string;
  coefficients: { a: number; b: number; c: number };
}

export interface Prompt {
  tone: "info" | "action" | "error";
  text: string;
}

export interface ViewState {
  server: SessionState | null;
  selectedFace: number | null;
  selectedEdges: number[];
  pendingFixedEdges: Record<number, number>;
  targetArea: number | null;
  analysis: Analysis | null;
  preview: PreviewState | null;
  rootChoice: RootChoice;
  conflictEdges: number[];
  prompt: Prompt | null;
  toggles: ViewToggles;
}

export function initialState(): ViewState {
  return {
    server: null,
    selectedFace: null,
    selectedEdges: [],
    pendingFixedEdges: {},
    targetArea: null,
    analysis: null,
    preview: null,
    rootChoice: "near",
    conflictEdges: [],
    prompt: null,
    toggles: { showNormals: false, dimZeroForce: true },
  };
}

export function applyServerState(state: ViewState,
                                 server: SessionState): ViewState {
  return { ...state, server, preview: null, conflictEdges: [] };
}

export function selectFace(state: ViewState, face: number | null): ViewState {
  return {
    ...state,
    selectedFace: face,
    analysis: null,
    preview: null,
    conflictEdges: [],
    prompt: null,
  };
}

export function toggleEdgeSelection(state: ViewState, edge: number): ViewState {
  const selected = state.selectedEdges.includes(edge)
    ? state.selectedEdges.filter((e) => e !== edge)
    : [...state.selectedEdges, edge];
  return { ...state, selectedEdges: selected };
}

export function setPendingFix(state: ViewState, edge: number,
                              length: number | null): ViewState {
  const pending = { ...state.pendingFixedEdges };
  if (length === null) {
    delete pending[edge];
  } else {
    pending[edge] = length;
  }
  return { ...state, pendingFixedEdges: pending, preview: null };
}

export function setTargetArea(state: ViewState,
                              area: number | null): ViewState {
  return { ...state, targetArea: area, preview: null };
}

export function setRootChoice(state: ViewState,
                              choice: RootChoice): ViewState {
  return { ...state, rootChoice: choice };
}

export function setToggle(state: ViewState, key: keyof ViewToggles,
                          value: boolean): ViewState {
  return { ...state, toggles: { ...state.toggles, [key]: value } };
}

export function applyAnalysis(state: ViewState,
                              analysis: Analysis): ViewState {
  if (!analysis.consistent) {
    return {
      ...state,
      analysis,
      conflictEdges: [...analysis.fix],
      prompt: {
        tone: "action",
        text:
          "Constraints conflict: CGDoF is -inf. Release one of the fixed " +
          `edges [${analysis.fix.join(", ")}] or change its length.`,
      },
    };
  }
  return {
    ...state,
    analysis,
    conflictEdges: [],
    prompt: {
      tone: "info",
      text: `CGDoF ${analysis.cgdof}: critical edge ${analysis.ci}, ` +
        `${analysis.nci.length} pinned independent, ` +
        `${analysis.nfd.length} dependent.`,
    },
  };
}

export function applyPreview(state: ViewState, face: number,
                             result: PreviewResult): ViewState {
  const overlays = result.previews.map((p) => ({
    root: p.root,
    vertices: p.face_vertices.map((v) => [v[0], v[1], v[2]] as Vec3),
  }));
  return {
    ...state,
    analysis: result.classification,
    preview: {
      faceIndex: face,
      roots: [...result.roots],
      overlays,
      previewId: result.preview_id,
      coefficients: result.coefficients,
    },
    prompt: {
      tone: "info",
      text: result.roots.length === 2
        ? `Two solutions: ${result.roots.map((r) => r.toPrecision(6)).join(" / ")}. Pick one and commit.`
        : `One solution: ${result.roots[0]?.toPrecision(6)}. Commit to apply.`,
    },
  };
}

export function applyCommit(state: ViewState,
                            server: SessionState): ViewState {
  return {
    ...applyServerState(state, server),
    analysis: null,
    prompt: { tone: "info", text: "Step committed. Form diagram updated." },
  };
}

export function applyUndo(state: ViewState,
                          server: SessionState): ViewState {
  return {
    ...applyServerState(state, server),
    analysis: null,
    prompt: { tone: "info", text: "Step undone. Both views restored." },
  };
}

export function applyServiceError(state: ViewState,
                                  error: ServiceError): ViewState {
  let prompt: Prompt;
  switch (error.kind) {
    case "no_solution":
      prompt = {
        tone: "action",
        text:
          "No geometry reaches this target area. Adjust the target " +
          `(${error.message}).`,
      };
      break;
    case "cgdof":
      prompt = {
        tone: "action",
        text:
          "The face is over-determined. Release some fixed edges and " +
          "analyze again.",
      };
      break;
    case "over_constrained":
      prompt = {
        tone: "action",
        text:
          "The whole polyhedron cannot absorb this step. Undo or relax " +
          "earlier constraints.",
      };
      break;
    default:
      prompt = { tone: "error", text: error.message };
  }
  return { ...state, prompt };
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get(): ViewState {
    return this.state;
  }

  set(next: ViewState): void {
    this.state = next;
    for (const listener of this.listeners) listener(next);
  }

  update(fn: (state: ViewState) => ViewState): void {
    this.set(fn(this.state));
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

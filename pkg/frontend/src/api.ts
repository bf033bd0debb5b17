// Typed client for the solver service. The UI never derives geometry on
// its own: everything rendered comes back from these calls.

export type Vec3 = [number, number, number];

export interface MeshDocument {
  vertices: number[][];
  edges: number[][];
  faces: { edges: [number, number][] }[];
  cells: { faces: [number, number][] }[];
}

export type ForceSign = "c" | "t" | "0";

export interface MemberForce {
  face: number;
  magnitude: number;
  sign: ForceSign;
}

export interface DualDocument extends MeshDocument {
  members: MemberForce[];
}

export interface StepEntry {
  face: number;
  target_area: number;
  roots: number[];
  chosen_root: number;
  residual: number;
  achieved_area: number;
}

export interface SessionState {
  id: string;
  version: number;
  primal: MeshDocument;
  edge_lengths: number[];
  fixed_edges: Record<string, number>;
  step_log: StepEntry[];
  dual: DualDocument | null;
  member_forces: MemberForce[];
}

export interface Analysis {
  cgdof: number | null;
  consistent: boolean;
  ci: number | null;
  nci: number[];
  fix: number[];
  nfd: number[];
}

export interface RootPreview {
  root: number;
  lengths: Record<string, number>;
  face_vertices: number[][];
}

export interface PreviewResult {
  classification: Analysis;
  coefficients: { a: number; b: number; c: number };
  roots: number[];
  previews: RootPreview[];
  preview_id: string;
}

export type ConstraintKind =
  | "cgdof"
  | "no_solution"
  | "over_constrained"
  | "degenerate_dual";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly kind: ConstraintKind | "http",
    detail: string,
  ) {
    super(detail);
  }
}

export type RootChoice = "near" | "low" | "high";

export interface CommitRequest {
  fixed_edges: Record<string, number>;
  target_area: number;
  root: RootChoice;
  preview_id?: string;
}

async function parseError(response: Response): Promise<never> {
  let kind: ServiceError["kind"] = "http";
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as { kind?: string; detail?: string };
    if (body.kind) kind = body.kind as ConstraintKind;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the HTTP detail
  }
  throw new ServiceError(response.status, kind, detail);
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body ?? {}),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  async createSession(model: MeshDocument): Promise<string> {
    const out = await this.post<{ id: string }>("/sessions", model);
    return out.id;
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.get(`/sessions/${sessionId}`);
  }

  analyze(
    sessionId: string,
    face: number,
    fixedEdges: Record<string, number>,
  ): Promise<Analysis> {
    return this.post(`/sessions/${sessionId}/faces/${face}/analyze`, {
      fixed_edges: fixedEdges,
    });
  }

  preview(
    sessionId: string,
    face: number,
    fixedEdges: Record<string, number>,
    targetArea: number,
  ): Promise<PreviewResult> {
    return this.post(`/sessions/${sessionId}/faces/${face}/preview`, {
      fixed_edges: fixedEdges,
      target_area: targetArea,
    });
  }

  commit(
    sessionId: string,
    face: number,
    request: CommitRequest,
  ): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/faces/${face}/commit`, request);
  }

  undo(sessionId: string): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/undo`, {});
  }

  getDual(sessionId: string): Promise<DualDocument> {
    return this.get(`/sessions/${sessionId}/dual`);
  }
}

// Serializable scene graphs built purely from service state and view
// toggles. The three.js layer consumes these; tests snapshot them.

import type { MeshDocument, MemberForce, SessionState, Vec3 } from "./api.js";
import type { ViewState } from "./state.js";

export const COLORS = {
  edge: "#6b7280",
  fixedEdge: "#f59e0b",
  conflictEdge: "#dc2626",
  selectedFace: "#fb923c",
  face: "#93b4d4",
  faceFlipped: "#d4a393",
  ghostA: "#16a34a",
  ghostB: "#9333ea",
  compression: "#2563eb",
  tension: "#dc2626",
  zeroForce: "#9ca3af",
  normal: "#0ea5e9",
} as const;

export interface Triangle {
  points: [Vec3, Vec3, Vec3];
  flipped: boolean;
}

export interface SceneNode {
  kind: "edge" | "face" | "ghost" | "member" | "normal";
  id: string;
  points: Vec3[];
  color: string;
  opacity: number;
  width: number;
  faceIndex?: number;
  edgeIndex?: number;
  triangles?: Triangle[];
}

export interface SceneGraph {
  nodes: SceneNode[];
}

function vec(p: number[]): Vec3 {
  return [p[0] ?? 0, p[1] ?? 0, p[2] ?? 0];
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function norm(a: Vec3): number {
  return Math.hypot(a[0], a[1], a[2]);
}

function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

function add(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function faceVertexLoop(mesh: MeshDocument, face: number): Vec3[] {
  const loop: Vec3[] = [];
  for (const [edge, sign] of mesh.faces[face]!.edges) {
    const [va, vb] = mesh.edges[edge]! as [number, number];
    loop.push(vec(mesh.vertices[sign > 0 ? va : vb]!));
  }
  return loop;
}

function loopNormal(loop: Vec3[]): Vec3 | null {
  for (let t = 0; t < loop.length; t += 1) {
    const a = sub(loop[(t + 1) % loop.length]!, loop[t]!);
    const b = sub(loop[(t + 2) % loop.length]!, loop[(t + 1) % loop.length]!);
    const n = cross(a, b);
    const len = norm(n);
    if (len > 1e-9) return scale(n, 1 / len);
  }
  return null;
}

/** Centroid-fan triangulation with per-region orientation flags, so that
 * the crossed regions of a self-intersecting face are shaded apart. */
export function triangulateFace(loop: Vec3[]): Triangle[] {
  if (loop.length < 3) return [];
  const centroid = scale(
    loop.reduce((acc, p) => add(acc, p), [0, 0, 0] as Vec3),
    1 / loop.length,
  );
  const normal = loopNormal(loop);
  if (!normal) return [];
  const triangles: Triangle[] = [];
  for (let t = 0; t < loop.length; t += 1) {
    const a = loop[t]!;
    const b = loop[(t + 1) % loop.length]!;
    const signed = dot(cross(sub(a, centroid), sub(b, centroid)), normal);
    triangles.push({ points: [centroid, a, b], flipped: signed < 0 });
  }
  return triangles;
}

export interface PrimalViewInput {
  server: SessionState;
  selectedFace: number | null;
  conflictEdges: number[];
  overlays: { root: number; vertices: Vec3[] }[];
  showNormals: boolean;
}

export function buildPrimalScene(input: PrimalViewInput): SceneGraph {
  const { server } = input;
  const mesh = server.primal;
  const nodes: SceneNode[] = [];
  const fixed = new Set(Object.keys(server.fixed_edges).map(Number));
  const conflicts = new Set(input.conflictEdges);

  mesh.edges.forEach((pair, index) => {
    const [va, vb] = pair as [number, number];
    let color: string = COLORS.edge;
    let width = 1;
    if (fixed.has(index)) {
      color = COLORS.fixedEdge;
      width = 2;
    }
    if (conflicts.has(index)) {
      color = COLORS.conflictEdge;
      width = 3;
    }
    nodes.push({
      kind: "edge",
      id: `edge-${index}`,
      points: [vec(mesh.vertices[va]!), vec(mesh.vertices[vb]!)],
      color,
      opacity: 1,
      width,
      edgeIndex: index,
    });
  });

  mesh.faces.forEach((_, face) => {
    const loop = faceVertexLoop(mesh, face);
    const selected = face === input.selectedFace;
    nodes.push({
      kind: "face",
      id: `face-${face}`,
      points: loop,
      color: selected ? COLORS.selectedFace : COLORS.face,
      opacity: selected ? 0.55 : 0.25,
      width: 0,
      faceIndex: face,
      triangles: triangulateFace(loop),
    });
    if (input.showNormals) {
      const normal = loopNormal(loop);
      if (normal) {
        const centroid = scale(
          loop.reduce((acc, p) => add(acc, p), [0, 0, 0] as Vec3),
          1 / loop.length,
        );
        const len = Math.max(norm(sub(loop[1]!, loop[0]!)) * 0.5, 1e-6);
        nodes.push({
          kind: "normal",
          id: `normal-${face}`,
          points: [centroid, add(centroid, scale(normal, len))],
          color: COLORS.normal,
          opacity: 1,
          width: 1,
          faceIndex: face,
        });
      }
    }
  });

  input.overlays.forEach((overlay, index) => {
    const closed = [...overlay.vertices, overlay.vertices[0]!];
    nodes.push({
      kind: "ghost",
      id: `ghost-${index}`,
      points: closed,
      color: index === 0 ? COLORS.ghostA : COLORS.ghostB,
      opacity: 0.9,
      width: 2,
    });
  });

  return { nodes };
}

export interface DualViewInput {
  vertices: number[][];
  edges: number[][];
  members: MemberForce[];
  dimZeroForce: boolean;
}

export function buildDualScene(input: DualViewInput): SceneGraph {
  const nodes: SceneNode[] = [];
  input.edges.forEach((pair, index) => {
    const [va, vb] = pair as [number, number];
    const member = input.members[index];
    let color: string = COLORS.compression;
    let opacity = 1;
    let width = 2;
    if (member?.sign === "t") color = COLORS.tension;
    if (member?.sign === "0") {
      color = COLORS.zeroForce;
      width = 1;
      if (input.dimZeroForce) opacity = 0.15;
    }
    nodes.push({
      kind: "member",
      id: `member-${index}`,
      points: [vec(input.vertices[va]!), vec(input.vertices[vb]!)],
      color,
      opacity,
      width,
      faceIndex: member?.face,
    });
  });
  return { nodes };
}

/** Scene pair for the paired force/form views; a pure function of the
 * last server state plus view toggles. */
export function buildScenes(state: ViewState): {
  primal: SceneGraph | null;
  dual: SceneGraph | null;
} {
  if (!state.server) return { primal: null, dual: null };
  const primal = buildPrimalScene({
    server: state.server,
    selectedFace: state.selectedFace,
    conflictEdges: state.conflictEdges,
    overlays: state.preview?.overlays ?? [],
    showNormals: state.toggles.showNormals,
  });
  let dual: SceneGraph | null = null;
  if (state.server.dual) {
    dual = buildDualScene({
      vertices: state.server.dual.vertices,
      edges: state.server.dual.edges,
      members: state.server.member_forces.length
        ? state.server.member_forces
        : state.server.dual.members,
      dimZeroForce: state.toggles.dimZeroForce,
    });
  }
  return { primal, dual };
}

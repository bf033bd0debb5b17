// Pentagon-prism model used by the tests: an irregular convex pentagon
// extruded into a single cell. Same schema the service expects.

import type { MeshDocument } from "../src/api.js";

const RAW_DIRECTIONS: [number, number][] = [
  [0.289, -0.957],
  [1.0, 0.0],
  [0.776, 0.631],
  [-0.734, 0.679],
  [-0.925, -0.38],
];

export const PENTAGON_FIXED_EDGE_TOP = 9; // edge 4 of the top pentagon
export const PENTAGON_FIXED_LENGTH = 41.78;

function unitDirections(): [number, number][] {
  return RAW_DIRECTIONS.map(([x, y]) => {
    const len = Math.hypot(x, y);
    return [x / len, y / len];
  });
}

function pentagonBase(): [number, number][] {
  const u = unitDirections();
  const [q2, q3, q4] = [25.0, 8.0, PENTAGON_FIXED_LENGTH];
  // close the loop: q0 u0 + q1 u1 = -(q2 u2 + q3 u3 + q4 u4)
  const rx = -(q2 * u[2]![0] + q3 * u[3]![0] + q4 * u[4]![0]);
  const ry = -(q2 * u[2]![1] + q3 * u[3]![1] + q4 * u[4]![1]);
  const det = u[0]![0] * u[1]![1] - u[1]![0] * u[0]![1];
  const q0 = (rx * u[1]![1] - u[1]![0] * ry) / det;
  const q1 = (u[0]![0] * ry - rx * u[0]![1]) / det;
  const lengths = [q0, q1, q2, q3, q4];

  const points: [number, number][] = [[0, 0]];
  for (let i = 0; i < 4; i += 1) {
    const [px, py] = points[i]!;
    points.push([px + lengths[i]! * u[i]![0], py + lengths[i]! * u[i]![1]]);
  }
  return points;
}

export function pentagonPrismDocument(height = 10): MeshDocument {
  const base = pentagonBase();
  const k = base.length;
  const vertices: number[][] = [
    ...base.map(([x, y]) => [x, y, 0]),
    ...base.map(([x, y]) => [x, y, height]),
  ];
  const edges: number[][] = [
    ...base.map((_, i) => [i, (i + 1) % k]),
    ...base.map((_, i) => [k + i, k + ((i + 1) % k)]),
    ...base.map((_, i) => [i, k + i]),
  ];
  const faces: MeshDocument["faces"] = [
    { edges: base.map((_, t) => [k - 1 - t, -1] as [number, number]) },
    { edges: base.map((_, t) => [k + t, 1] as [number, number]) },
  ];
  for (let i = 0; i < k; i += 1) {
    faces.push({
      edges: [
        [i, 1],
        [2 * k + ((i + 1) % k), 1],
        [k + i, -1],
        [2 * k + i, -1],
      ],
    });
  }
  const cells = [{
    faces: faces.map((_, f) => [f, 1] as [number, number]),
  }];
  return { vertices, edges, faces, cells };
}

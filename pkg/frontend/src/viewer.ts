// three.js adapter: renders serialized scene graphs into paired canvases
// with synchronized orbit cameras and raycast face/edge picking.

import * as THREE from "three";

import type { SceneGraph, SceneNode } from "./scene.js";

export interface PickResult {
  kind: "face" | "edge" | "member";
  index: number;
}

interface Orbit {
  theta: number;
  phi: number;
  radius: number;
  target: THREE.Vector3;
}

export class PairedViewer {
  private readonly renderers: THREE.WebGLRenderer[] = [];
  private readonly scenes: THREE.Scene[] = [];
  private readonly cameras: THREE.PerspectiveCamera[] = [];
  private readonly orbit: Orbit = {
    theta: Math.PI / 4,
    phi: Math.PI / 3,
    radius: 60,
    target: new THREE.Vector3(),
  };
  private pickables: THREE.Object3D[][] = [[], []];

  constructor(
    private readonly canvases: [HTMLCanvasElement, HTMLCanvasElement],
    private readonly onPick?: (view: number, hit: PickResult | null) => void,
  ) {
    canvases.forEach((canvas, view) => {
      const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
      renderer.setClearColor(0xf8fafc);
      const scene = new THREE.Scene();
      scene.add(new THREE.AmbientLight(0xffffff, 0.9));
      const sun = new THREE.DirectionalLight(0xffffff, 0.8);
      sun.position.set(1, 2, 3);
      scene.add(sun);
      const camera = new THREE.PerspectiveCamera(
        45, canvas.clientWidth / Math.max(canvas.clientHeight, 1), 0.01, 5000);
      this.renderers.push(renderer);
      this.scenes.push(scene);
      this.cameras.push(camera);
      this.attachControls(canvas, view);
    });
    this.animate();
  }

  private attachControls(canvas: HTMLCanvasElement, view: number): void {
    let dragging = false;
    let moved = false;
    let lastX = 0;
    let lastY = 0;
    canvas.addEventListener("pointerdown", (event) => {
      dragging = true;
      moved = false;
      lastX = event.clientX;
      lastY = event.clientY;
    });
    window.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      const dx = event.clientX - lastX;
      const dy = event.clientY - lastY;
      if (Math.abs(dx) + Math.abs(dy) > 2) moved = true;
      lastX = event.clientX;
      lastY = event.clientY;
      this.orbit.theta -= dx * 0.008;
      this.orbit.phi = Math.min(
        Math.PI - 0.05, Math.max(0.05, this.orbit.phi - dy * 0.008));
    });
    window.addEventListener("pointerup", (event) => {
      if (dragging && !moved && event.target === canvas) {
        this.pick(canvas, view, event);
      }
      dragging = false;
    });
    canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      this.orbit.radius *= Math.exp(event.deltaY * 0.001);
    }, { passive: false });
  }

  private pick(canvas: HTMLCanvasElement, view: number,
               event: PointerEvent): void {
    if (!this.onPick) return;
    const rect = canvas.getBoundingClientRect();
    const pointer = new THREE.Vector2(
      ((event.clientX - rect.left) / rect.width) * 2 - 1,
      -((event.clientY - rect.top) / rect.height) * 2 + 1,
    );
    const raycaster = new THREE.Raycaster();
    raycaster.params.Line = { threshold: 0.5 };
    raycaster.setFromCamera(pointer, this.cameras[view]!);
    const hits = raycaster.intersectObjects(this.pickables[view]!, false);
    const first = hits[0]?.object;
    const data = first?.userData as PickResult | undefined;
    this.onPick(view, data && data.kind ? data : null);
  }

  /** Replace the contents of one view with a new scene graph. */
  show(view: number, graph: SceneGraph | null): void {
    const scene = this.scenes[view]!;
    const stale = scene.children.filter((c) => c.userData.generated);
    stale.forEach((c) => scene.remove(c));
    this.pickables[view] = [];
    if (!graph) return;

    const bounds = new THREE.Box3();
    for (const node of graph.nodes) {
      const objects = this.materialize(node);
      for (const object of objects) {
        object.userData.generated = true;
        scene.add(object);
        if (node.kind === "face" || node.kind === "member" ||
            node.kind === "edge") {
          object.userData.kind =
            node.kind === "face" ? "face" :
            node.kind === "member" ? "member" : "edge";
          object.userData.index = node.faceIndex ?? node.edgeIndex ?? -1;
          this.pickables[view]!.push(object);
        }
      }
      for (const p of node.points) {
        bounds.expandByPoint(new THREE.Vector3(p[0], p[1], p[2]));
      }
    }
    if (!bounds.isEmpty()) {
      bounds.getCenter(this.orbit.target);
      const size = bounds.getSize(new THREE.Vector3()).length();
      if (size > 0 && view === 0) this.orbit.radius = size * 1.4;
    }
  }

  private materialize(node: SceneNode): THREE.Object3D[] {
    if (node.kind === "face" && node.triangles) {
      const plain: number[] = [];
      const flipped: number[] = [];
      for (const tri of node.triangles) {
        const target = tri.flipped ? flipped : plain;
        for (const p of tri.points) target.push(p[0], p[1], p[2]);
      }
      const out: THREE.Object3D[] = [];
      for (const [coords, shade] of [
        [plain, node.color],
        [flipped, "#d4a393"],
      ] as [number[], string][]) {
        if (!coords.length) continue;
        const geometry = new THREE.BufferGeometry();
        geometry.setAttribute(
          "position", new THREE.Float32BufferAttribute(coords, 3));
        geometry.computeVertexNormals();
        const material = new THREE.MeshStandardMaterial({
          color: shade,
          transparent: true,
          opacity: node.opacity,
          side: THREE.DoubleSide,
          depthWrite: false,
        });
        out.push(new THREE.Mesh(geometry, material));
      }
      return out;
    }

    const geometry = new THREE.BufferGeometry().setFromPoints(
      node.points.map((p) => new THREE.Vector3(p[0], p[1], p[2])));
    const material = new THREE.LineBasicMaterial({
      color: node.color,
      transparent: node.opacity < 1,
      opacity: node.opacity,
      linewidth: node.width,
    });
    const line = node.kind === "ghost"
      ? new THREE.Line(geometry, new THREE.LineDashedMaterial({
          color: node.color, dashSize: 1, gapSize: 0.5,
          transparent: true, opacity: node.opacity,
        }))
      : new THREE.Line(geometry, material);
    if (node.kind === "ghost") line.computeLineDistances();
    return [line];
  }

  private animate = (): void => {
    requestAnimationFrame(this.animate);
    const { theta, phi, radius, target } = this.orbit;
    const eye = new THREE.Vector3(
      target.x + radius * Math.sin(phi) * Math.cos(theta),
      target.y + radius * Math.sin(phi) * Math.sin(theta),
      target.z + radius * Math.cos(phi),
    );
    this.cameras.forEach((camera, view) => {
      const canvas = this.canvases[view]!;
      const width = canvas.clientWidth || 1;
      const height = canvas.clientHeight || 1;
      this.renderers[view]!.setSize(width, height, false);
      camera.aspect = width / height;
      camera.up.set(0, 0, 1);
      camera.position.copy(eye);
      camera.lookAt(target);
      camera.updateProjectionMatrix();
      this.renderers[view]!.render(this.scenes[view]!, camera);
    });
  };
}

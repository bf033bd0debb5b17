// DOM wiring: panels on the left, paired force/form canvases on the right.

import { ApiClient } from "./api.js";
import type { MeshDocument } from "./api.js";
import { buildScenes } from "./scene.js";
import { setPendingFix, setRootChoice, setTargetArea, setToggle, Store }
  from "./state.js";
import { PairedViewer } from "./viewer.js";
import { UiWorkflow } from "./workflow.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const serviceBase =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8750";

const store = new Store();
const api = new ApiClient(serviceBase);
const workflow = new UiWorkflow(api, store);

const viewer = new PairedViewer(
  [el<HTMLCanvasElement>("force-view"), el<HTMLCanvasElement>("form-view")],
  (view, hit) => {
    if (view === 0 && hit?.kind === "face") void workflow.pickFace(hit.index);
  },
);

store.subscribe((state) => {
  const scenes = buildScenes(state);
  viewer.show(0, scenes.primal);
  viewer.show(1, scenes.dual);

  el("prompt").textContent = state.prompt?.text ?? "";
  el("prompt").dataset.tone = state.prompt?.tone ?? "info";
  el("selected-face").textContent =
    state.selectedFace === null ? "none" : `face ${state.selectedFace}`;
  el("cgdof").textContent = state.analysis
    ? (state.analysis.consistent ? String(state.analysis.cgdof) : "-inf")
    : "-";

  const rootPanel = el("roots");
  rootPanel.innerHTML = "";
  for (const [index, root] of (state.preview?.roots ?? []).entries()) {
    const button = document.createElement("button");
    button.textContent =
      `root ${index === 0 ? "low" : "high"}: ${root.toPrecision(6)}`;
    button.onclick = () =>
      void workflow.commitChosenRoot(index === 0 ? "low" : "high");
    rootPanel.appendChild(button);
  }

  const log = el("steps");
  log.innerHTML = "";
  for (const step of state.server?.step_log ?? []) {
    const item = document.createElement("li");
    item.textContent = `face ${step.face} -> area ` +
      `${step.achieved_area.toPrecision(4)} (root ${step.chosen_root.toPrecision(5)})`;
    log.appendChild(item);
  }
});

el<HTMLInputElement>("model-file").addEventListener("change", async (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  const model = JSON.parse(await file.text()) as MeshDocument;
  await workflow.loadModel(model);
});

el<HTMLButtonElement>("add-fix").onclick = () => {
  const edge = Number(el<HTMLInputElement>("fix-edge").value);
  const length = Number(el<HTMLInputElement>("fix-length").value);
  if (Number.isFinite(edge) && Number.isFinite(length)) {
    store.update((s) => setPendingFix(s, edge, length));
    void workflow.analyzeSelected();
  }
};

el<HTMLButtonElement>("preview").onclick = () => {
  const area = Number(el<HTMLInputElement>("target-area").value);
  if (Number.isFinite(area)) {
    store.update((s) => setTargetArea(s, area));
    void workflow.previewTarget();
  }
};

el<HTMLButtonElement>("commit").onclick = () =>
  void workflow.commitChosenRoot();
el<HTMLButtonElement>("undo").onclick = () => void workflow.undo();

el<HTMLSelectElement>("root-choice").onchange = (event) => {
  const value = (event.target as HTMLSelectElement).value;
  if (value === "near" || value === "low" || value === "high") {
    store.update((s) => setRootChoice(s, value));
  }
};

el<HTMLInputElement>("toggle-normals").onchange = (event) =>
  store.update((s) =>
    setToggle(s, "showNormals", (event.target as HTMLInputElement).checked));
el<HTMLInputElement>("toggle-dim-zero").onchange = (event) =>
  store.update((s) =>
    setToggle(s, "dimZeroForce", (event.target as HTMLInputElement).checked));

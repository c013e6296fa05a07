/** Browser entry: wires the session client, view state, and renderer.
 *
 * Layout: a sidebar with rule selection, the match list, undo and
 * download buttons, and a WebGL viewport.  Hovering a match shows a
 * ghost preview; clicking applies it on the server and re-renders.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { SessionClient } from "./api.js";
import {
  buildGroup,
  defaultLights,
  orbitCamera,
  planCamera,
} from "./render.js";
import type { RenderMode, SceneDoc } from "./types.js";
import { ViewState } from "./viewstate.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "http://localhost:8000";
const RULES = [
  "tetra_on_octa_face",
  "tetra_on_tetra_face",
  "octa_on_octa_face",
  "tetra_octa_edge",
  "octa_octa_edge",
  "tetra_octa_vertex",
];

function download(name: string, text: string, type: string): void {
  const blob = new Blob([text], { type });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = name;
  a.click();
  URL.revokeObjectURL(a.href);
}

async function start(): Promise<void> {
  const viewport = document.getElementById("viewport") as HTMLElement;
  const matchList = document.getElementById("matches") as HTMLElement;
  const noticeBox = document.getElementById("notice") as HTMLElement;
  const ruleSelect = document.getElementById("rule") as HTMLSelectElement;
  const modeSelect = document.getElementById("mode") as HTMLSelectElement;

  for (const rule of RULES) {
    const option = document.createElement("option");
    option.value = rule;
    option.textContent = rule;
    ruleSelect.appendChild(option);
  }

  const client = await SessionClient.create(SERVICE_URL, "octa");
  const view = new ViewState(client, RULES[0]);

  const renderer = new THREE.WebGLRenderer({ antialias: true });
  renderer.setSize(viewport.clientWidth, viewport.clientHeight);
  viewport.appendChild(renderer.domElement);

  const stage = new THREE.Scene();
  stage.background = new THREE.Color(0xf4f4f0);
  stage.add(defaultLights());

  let sceneDoc: SceneDoc = await client.scene();
  let camera: THREE.Camera = orbitCamera(
    sceneDoc,
    viewport.clientWidth / viewport.clientHeight,
  );
  let controls = new OrbitControls(
    camera as THREE.PerspectiveCamera,
    renderer.domElement,
  );
  let group = new THREE.Group();

  function rebuild(): void {
    stage.remove(group);
    const mode = view.renderMode === "plan" ? "cells" : view.renderMode;
    group = buildGroup(sceneDoc, { mode, ghost: view.hovered });
    stage.add(group);
  }

  function setMode(mode: RenderMode): void {
    view.renderMode = mode;
    const aspect = viewport.clientWidth / viewport.clientHeight;
    controls.dispose();
    camera = mode === "plan" ? planCamera(sceneDoc, aspect) : orbitCamera(sceneDoc, aspect);
    controls = new OrbitControls(camera as THREE.PerspectiveCamera, renderer.domElement);
    if (mode === "plan") controls.enableRotate = false;
    rebuild();
  }

  function renderNotice(): void {
    noticeBox.textContent = view.notice?.text ?? "";
    noticeBox.className = view.notice ? `notice ${view.notice.kind}` : "notice";
  }

  function renderMatchList(): void {
    matchList.replaceChildren();
    view.matches.forEach((match, index) => {
      const item = document.createElement("li");
      item.textContent =
        `#${index} host ${match.host} feature ${match.feature} ` +
        `variant ${match.variant}`;
      item.addEventListener("mouseenter", () => {
        view.hover(index);
        rebuild();
      });
      item.addEventListener("mouseleave", () => {
        view.hover(null);
        rebuild();
      });
      item.addEventListener("click", () => {
        void step(index);
      });
      matchList.appendChild(item);
    });
  }

  async function refreshAll(): Promise<void> {
    sceneDoc = await client.scene();
    await view.refreshMatches();
    renderMatchList();
    renderNotice();
    rebuild();
  }

  async function step(index: number): Promise<void> {
    await view.applyMatch(index);
    await refreshAll();
  }

  ruleSelect.addEventListener("change", () => {
    void view.selectRule(ruleSelect.value).then(() => {
      renderMatchList();
      rebuild();
    });
  });
  modeSelect.addEventListener("change", () => {
    setMode(modeSelect.value as RenderMode);
  });
  (document.getElementById("undo") as HTMLElement).addEventListener(
    "click",
    () => {
      void view.undo().then(refreshAll);
    },
  );
  (document.getElementById("download-scene") as HTMLElement).addEventListener(
    "click",
    () => {
      void client.scene().then((doc) => {
        download("scene.json", JSON.stringify(doc, null, 2), "application/json");
      });
    },
  );
  (document.getElementById("download-obj") as HTMLElement).addEventListener(
    "click",
    () => {
      void client.obj("frame").then((text) => {
        download("frame.obj", text, "text/plain");
      });
    },
  );

  await refreshAll();

  function animate(): void {
    requestAnimationFrame(animate);
    controls.update();
    renderer.render(stage, camera);
  }
  animate();
}

void start();

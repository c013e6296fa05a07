/** three.js scene-graph construction from server scene documents.
 *
 * Pure geometry assembly: no renderer or DOM here, so it runs under
 * node for tests.  All vertex data comes from the server verbatim;
 * ghost previews reuse the match's preview transform as-is.
 */

import * as THREE from "three";
import type { CellDoc, MatchDoc, SceneDoc } from "./types.js";

export const SPECIES_COLORS: Record<string, number> = {
  octa: 0x4477aa,
  tetra_up: 0xcc6677,
  tetra_down: 0xbb5566,
  half_octa: 0xddaa33,
};

// vertex-index faces per species, matching the server's vertex order
export const SPECIES_FACES: Record<string, number[][]> = {
  tetra_up: [[0, 1, 2], [3, 1, 0], [0, 2, 3], [3, 2, 1]],
  tetra_down: [[2, 1, 0], [0, 1, 3], [3, 2, 0], [1, 2, 3]],
  octa: [
    [4, 2, 0], [0, 2, 5], [0, 3, 4], [5, 3, 0],
    [1, 2, 4], [5, 2, 1], [4, 3, 1], [1, 3, 5],
  ],
  half_octa: [[0, 1, 2, 3], [4, 1, 0], [4, 2, 1], [4, 3, 2], [4, 0, 3]],
};

const MEMBER_COLOR = 0x222222;
const GHOST_OPACITY = 0.35;

function cellFaceIndices(cell: CellDoc): number[] {
  const faces = SPECIES_FACES[cell.species];
  if (!faces) throw new Error(`unknown species ${cell.species}`);
  const triples: number[] = [];
  for (const face of faces) {
    // fan-triangulate; only the half-octa base is not already a triangle
    for (let k = 1; k + 1 < face.length; k++) {
      triples.push(face[0], face[k], face[k + 1]);
    }
  }
  return triples;
}

export function cellMesh(cell: CellDoc, ghost = false): THREE.Mesh {
  const points = cell.vertices.map((v) => new THREE.Vector3(v[0], v[1], v[2]));
  const geometry = new THREE.BufferGeometry().setFromPoints(points);
  geometry.setIndex(cellFaceIndices(cell));
  geometry.computeVertexNormals();
  geometry.computeBoundingSphere();
  const material = new THREE.MeshStandardMaterial({
    color: SPECIES_COLORS[cell.species] ?? 0x888888,
    side: THREE.DoubleSide,
    transparent: ghost,
    opacity: ghost ? GHOST_OPACITY : 1.0,
  });
  const mesh = new THREE.Mesh(geometry, material);
  mesh.name = ghost ? `ghost:${cell.species}` : `cell:${cell.species}`;
  return mesh;
}

export function frameLines(scene: SceneDoc): THREE.LineSegments {
  const positions: number[] = [];
  for (const [a, b] of scene.frame.members) {
    const na = scene.frame.nodes[a];
    const nb = scene.frame.nodes[b];
    positions.push(na[0], na[1], na[2], nb[0], nb[1], nb[2]);
  }
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute(
    "position",
    new THREE.Float32BufferAttribute(positions, 3),
  );
  const lines = new THREE.LineSegments(
    geometry,
    new THREE.LineBasicMaterial({ color: MEMBER_COLOR }),
  );
  lines.name = "frame";
  return lines;
}

export interface BuildOptions {
  mode?: "cells" | "frame" | "plan";
  ghost?: MatchDoc | null;
}

/** Build the displayable group for a scene document. */
export function buildGroup(scene: SceneDoc, options: BuildOptions = {}): THREE.Group {
  const mode = options.mode ?? "cells";
  const group = new THREE.Group();
  group.name = "assembly";
  if (mode === "frame") {
    group.add(frameLines(scene));
  } else {
    for (const cell of scene.cells) {
      group.add(cellMesh(cell));
    }
    group.add(frameLines(scene));
  }
  if (options.ghost) {
    group.add(cellMesh(options.ghost.cell, true));
  }
  return group;
}

/** Orthographic plan-view camera looking down world +Z. */
export function planCamera(scene: SceneDoc, aspect = 1): THREE.OrthographicCamera {
  let radius = 1;
  for (const cell of scene.cells) {
    for (const v of cell.vertices) {
      radius = Math.max(radius, Math.hypot(v[0], v[1]));
    }
  }
  const half = radius * 1.1;
  const camera = new THREE.OrthographicCamera(
    -half * aspect,
    half * aspect,
    half,
    -half,
    0.1,
    10000,
  );
  let top = 1;
  for (const cell of scene.cells) {
    for (const v of cell.vertices) top = Math.max(top, v[2]);
  }
  camera.position.set(0, 0, top + 10);
  camera.up.set(0, 1, 0);
  camera.lookAt(0, 0, 0);
  return camera;
}

export function orbitCamera(scene: SceneDoc, aspect = 1): THREE.PerspectiveCamera {
  let radius = 1;
  for (const cell of scene.cells) {
    for (const v of cell.vertices) {
      radius = Math.max(radius, Math.hypot(v[0], v[1], v[2]));
    }
  }
  const camera = new THREE.PerspectiveCamera(50, aspect, 0.1, radius * 100);
  camera.position.set(radius * 2, -radius * 2, radius * 1.5);
  camera.up.set(0, 0, 1);
  camera.lookAt(0, 0, 0);
  return camera;
}

export function defaultLights(): THREE.Group {
  const lights = new THREE.Group();
  lights.name = "lights";
  lights.add(new THREE.AmbientLight(0xffffff, 0.6));
  const key = new THREE.DirectionalLight(0xffffff, 0.9);
  key.position.set(5, -8, 10);
  lights.add(key);
  return lights;
}

/** Wire types for the derivation session service. */

export type SpeciesName = "tetra_up" | "tetra_down" | "octa" | "half_octa";

export interface CellDoc {
  species: SpeciesName;
  vertices: number[][];
  tags: string[];
}

export interface DerivationStepDoc {
  rule: string;
  host: number;
  feature: number;
  variant: number;
}

export interface ScriptDoc {
  initial: string;
  steps: DerivationStepDoc[];
}

export interface StateDoc {
  fingerprint: string;
  cells: CellDoc[];
  script: ScriptDoc | null;
}

export interface SessionDoc {
  id: string;
  state: StateDoc;
}

export interface MatchTransform {
  linear: number[][];
  translation: number[];
}

export interface MatchDoc {
  rule: string;
  host: number;
  feature: number;
  variant: number;
  transform: MatchTransform;
  cell: CellDoc;
}

export interface MatchList {
  /** Fingerprint of the state the matches were computed against. */
  state: string;
  matches: MatchDoc[];
}

export interface SceneTransformDoc {
  scale: number;
  origin: number[];
  rotation: number[][];
}

export interface SceneDoc {
  units: "lattice" | "feet";
  transform: SceneTransformDoc | null;
  cells: CellDoc[];
  frame: { nodes: number[][]; members: number[][] };
  provenance: ScriptDoc | null;
}

export type RenderMode = "cells" | "frame" | "plan";

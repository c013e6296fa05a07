/** End-to-end derivation loop against the live session service. */

import { describe, expect, it } from "vitest";
import { SessionClient, StaleStateError } from "../src/api.js";
import { ViewState } from "../src/viewstate.js";
import { SERVICE_URL } from "./helpers.js";

const RULE = "tetra_on_octa_face";

describe("session lifecycle", () => {
  it("creates a bare-octa session with one cell", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    expect(client.lastState?.cells).toHaveLength(1);
    expect(client.lastState?.fingerprint).toBeTruthy();
  });

  it("lists 24 face matches on a bare octa", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const list = await client.matches(RULE);
    expect(list.matches).toHaveLength(24);
    expect(list.state).toBe(client.lastState?.fingerprint);
  });

  it("apply then undo restores the original fingerprint", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const original = client.lastState!.fingerprint;
    const list = await client.matches(RULE);
    const applied = await client.apply(RULE, 0, list.state);
    expect(applied.cells).toHaveLength(2);
    expect(applied.fingerprint).not.toBe(original);
    const undone = await client.undo();
    expect(undone.fingerprint).toBe(original);
  });

  it("rejects a stale apply with 409", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const list = await client.matches(RULE);
    await client.apply(RULE, 0, list.state);
    await expect(client.apply(RULE, 1, list.state)).rejects.toBeInstanceOf(
      StaleStateError,
    );
  });

  it("downloads scene and OBJ for the current state", async () => {
    const client = await SessionClient.create(SERVICE_URL, "fundamental_unit");
    const scene = await client.scene();
    expect(scene.cells).toHaveLength(3);
    expect(scene.units).toBe("lattice");
    const obj = await client.obj("frame");
    const lines = obj.split("\n");
    expect(lines.filter((l) => l.startsWith("v "))).toHaveLength(8);
    expect(lines.filter((l) => l.startsWith("l "))).toHaveLength(18);
  });
});

describe("derivation scripts", () => {
  it("recorded script replays on a fresh session to the same fingerprint", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    for (let i = 0; i < 3; i++) {
      const list = await client.matches(RULE);
      await client.apply(RULE, 0, list.state);
    }
    const state = client.lastState!;
    const script = state.script!;
    expect(script.steps).toHaveLength(3);

    const replay = await SessionClient.create(SERVICE_URL, script.initial);
    for (const step of script.steps) {
      const list = await replay.matches(step.rule);
      const index = list.matches.findIndex(
        (m) =>
          m.host === step.host &&
          m.feature === step.feature &&
          m.variant === step.variant,
      );
      expect(index).toBeGreaterThanOrEqual(0);
      await replay.apply(step.rule, index, list.state);
    }
    expect(replay.lastState!.fingerprint).toBe(state.fingerprint);
  });
});

describe("view state loop", () => {
  it("keeps hover inside the latest match list", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const view = new ViewState(client, RULE);
    await view.refreshMatches();
    view.hover(5);
    expect(view.hovered?.rule).toBe(RULE);
    expect(() => view.hover(99)).toThrow(RangeError);
    await view.refreshMatches();
    expect(view.hoveredIndex).toBeNull();
  });

  it("applies a match and refetches", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const view = new ViewState(client, RULE);
    await view.refreshMatches();
    const before = view.matchState;
    expect(await view.applyMatch(0)).toBe(true);
    expect(view.matchState).not.toBe(before);
    expect(view.notice).toBeNull();
    expect(view.state.cells).toHaveLength(2);
  });

  it("stale apply refreshes the list and leaves a notice", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const view = new ViewState(client, RULE);
    await view.refreshMatches();
    const staleState = view.matchState!;
    // another actor advances the session behind the view's back
    const list = await client.matches(RULE);
    await client.apply(RULE, 0, list.state);
    view.matchState = staleState;
    expect(await view.applyMatch(0)).toBe(false);
    expect(view.notice?.kind).toBe("stale");
    expect(view.matchState).not.toBe(staleState);
    expect(view.hoveredIndex).toBeNull();
  });

  it("undo returns to the pre-apply fingerprint", async () => {
    const client = await SessionClient.create(SERVICE_URL, "octa");
    const original = client.lastState!.fingerprint;
    const view = new ViewState(client, RULE);
    await view.refreshMatches();
    await view.applyMatch(0);
    await view.undo();
    expect(view.state.fingerprint).toBe(original);
    expect(view.matchState).toBe(original);
  });
});

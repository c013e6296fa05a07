/** Client-side derivation loop state.
 *
 * Invariant: a hovered match always belongs to the latest fetched
 * match list; whenever the state fingerprint changes the list is
 * refetched and the hover cleared.  A stale apply (409) triggers an
 * automatic refresh and leaves a visible notice.
 */

import { SessionClient, StaleStateError } from "./api.js";
import type { MatchDoc, RenderMode, StateDoc } from "./types.js";

export interface Notice {
  kind: "info" | "stale" | "error";
  text: string;
}

export class ViewState {
  selectedRule: string;
  renderMode: RenderMode = "cells";
  hoveredIndex: number | null = null;
  matches: MatchDoc[] = [];
  /** Fingerprint the current match list was computed against. */
  matchState: string | null = null;
  notice: Notice | null = null;

  constructor(
    readonly client: SessionClient,
    rule: string,
  ) {
    this.selectedRule = rule;
  }

  get state(): StateDoc {
    const state = this.client.lastState;
    if (state === null) throw new Error("session has no state yet");
    return state;
  }

  get hovered(): MatchDoc | null {
    return this.hoveredIndex === null ? null : this.matches[this.hoveredIndex];
  }

  async refreshMatches(): Promise<void> {
    const list = await this.client.matches(this.selectedRule);
    this.matches = list.matches;
    this.matchState = list.state;
    this.hoveredIndex = null;
  }

  async selectRule(rule: string): Promise<void> {
    this.selectedRule = rule;
    await this.refreshMatches();
  }

  hover(index: number | null): void {
    if (index !== null && (index < 0 || index >= this.matches.length)) {
      throw new RangeError(`match index ${index} not in current list`);
    }
    this.hoveredIndex = index;
  }

  /** Apply one match; on a stale list, refetch and report the conflict. */
  async applyMatch(index: number): Promise<boolean> {
    if (this.matchState === null) throw new Error("no match list fetched");
    try {
      await this.client.apply(this.selectedRule, index, this.matchState);
    } catch (err) {
      if (err instanceof StaleStateError) {
        this.notice = {
          kind: "stale",
          text: "session changed; match list refreshed",
        };
        await this.refreshMatches();
        return false;
      }
      throw err;
    }
    this.notice = null;
    await this.refreshMatches();
    return true;
  }

  async undo(): Promise<void> {
    await this.client.undo();
    this.notice = null;
    await this.refreshMatches();
  }
}

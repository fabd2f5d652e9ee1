// Client view state. Two invariants are enforced by the app: at most one
// active query wall, and at most one selected record at a time.

import type { OpacityMode } from "./types";

export interface TimeWindow {
  from: string | null;
  to: string | null;
}

export interface ViewState {
  interval: TimeWindow;
  opacityMode: OpacityMode;
  activeKeyword: string | null;
  selectedId: string | null;
  followedUser: string | null;
}

export function initialViewState(): ViewState {
  return {
    interval: { from: null, to: null },
    opacityMode: "solid",
    activeKeyword: null,
    selectedId: null,
    followedUser: null,
  };
}

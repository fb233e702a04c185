/** UI state and its reducer.
 *
 * The state is the experiment config plus animation bookkeeping (the
 * animation oscillates the a/b ratio inside a range) and a banner slot.
 * Every action produces at most one new config, so one user gesture maps
 * to at most one locus request — switching family re-requests all four
 * channels in a single round trip.
 */

import { cloneConfig, defaultChannel, defaultConfig } from "./config.js";
import {
  CENTER_TYPES,
  ChannelConfig,
  Color,
  ExperimentConfig,
} from "./types.js";

export interface AnimState {
  running: boolean;
  /** Oscillation cycles per second. */
  speed: number;
  /** a/b ratio range the animation sweeps. */
  lo: number;
  hi: number;
  /** Phase in [0, 1): 0 -> lo, 0.5 -> hi, triangle wave. */
  phase: number;
}

export interface UiState {
  config: ExperimentConfig;
  anim: AnimState;
  banner: string | null;
}

export function initialState(config?: ExperimentConfig): UiState {
  return {
    config: config ?? defaultConfig(),
    anim: { running: false, speed: 0.2, lo: 1.2, hi: 2.0, phase: 0 },
    banner: null,
  };
}

/** Triangle wave: phase 0 -> lo, 0.5 -> hi, 1 -> lo. */
export function ratioAt(anim: AnimState): number {
  const t = anim.phase - Math.floor(anim.phase);
  const up = t < 0.5 ? 2 * t : 2 * (1 - t);
  return anim.lo + (anim.hi - anim.lo) * up;
}

export type Action =
  | { type: "family"; kind: string }
  | { type: "ratio"; value: number }
  | { type: "aux"; value: number | null }
  | { type: "seed"; value: [number, number, number] | null }
  | { type: "channel"; slot: number; patch: Partial<ChannelConfig> }
  | { type: "samples"; value: number }
  | { type: "rmax"; value: number }
  | { type: "rotation"; value: number }
  | { type: "background"; value: Color }
  | { type: "anim"; patch: Partial<AnimState> }
  | { type: "step"; delta: number }
  | { type: "tick"; dtMs: number }
  | { type: "load"; config: ExperimentConfig }
  | { type: "banner"; message: string | null }
  | { type: "reset" };

function clampRatio(v: number): number {
  if (!Number.isFinite(v)) return 1.0;
  return Math.min(Math.max(v, 1.0), 10.0);
}

/** Keep a channel's wiring schema-valid after a partial edit. */
function fixupChannel(ch: ChannelConfig): void {
  if (CENTER_TYPES.includes(ch.locus_type) && ch.center === null) {
    ch.center = 1;
  }
  if (ch.locus_type === "env" && ch.env === null) {
    ch.env = [2, 3];
  }
}

function withConfig(state: UiState, mutate: (cfg: ExperimentConfig) => void): UiState {
  const config = cloneConfig(state.config);
  mutate(config);
  return { ...state, config };
}

function applyRatio(state: UiState, ratio: number): UiState {
  return withConfig(state, (cfg) => {
    cfg.family.a = clampRatio(ratio) * cfg.family.b;
  });
}

export function reduce(state: UiState, action: Action): UiState {
  switch (action.type) {
    case "family":
      return withConfig(state, (cfg) => {
        cfg.family.kind = action.kind;
        // aux and seed mean different things per family; start clean
        cfg.family.aux = null;
        cfg.family.seed = null;
        if (cfg.family.a < cfg.family.b) cfg.family.a = cfg.family.b;
      });
    case "ratio":
      return applyRatio(state, action.value);
    case "aux":
      return withConfig(state, (cfg) => {
        cfg.family.aux = action.value;
      });
    case "seed":
      return withConfig(state, (cfg) => {
        cfg.family.seed = action.value;
      });
    case "channel":
      return withConfig(state, (cfg) => {
        // slots are 1-based, matching the c1..c4 URL keys
        const ch = cfg.channels[action.slot - 1];
        if (!ch) return;
        Object.assign(ch, action.patch);
        fixupChannel(ch);
      });
    case "samples":
      return withConfig(state, (cfg) => {
        cfg.samples = Math.max(8, Math.round(action.value));
      });
    case "rmax":
      return withConfig(state, (cfg) => {
        if (Number.isFinite(action.value) && action.value > 0) {
          cfg.rmax = action.value;
        }
      });
    case "rotation":
      return withConfig(state, (cfg) => {
        if ([0, 90, 180, 270].includes(action.value)) {
          cfg.rotation = action.value;
        }
      });
    case "background":
      return withConfig(state, (cfg) => {
        cfg.background = [...action.value] as Color;
      });
    case "anim": {
      const anim = { ...state.anim, ...action.patch };
      if (anim.lo < 1.0) anim.lo = 1.0;
      if (anim.hi < anim.lo) anim.hi = anim.lo;
      return { ...state, anim };
    }
    case "step": {
      // arrow keys: nudge the oscillation phase while paused
      if (state.anim.running) return state;
      const phase = (((state.anim.phase + action.delta) % 1) + 1) % 1;
      const next = { ...state, anim: { ...state.anim, phase } };
      return applyRatio(next, ratioAt(next.anim));
    }
    case "tick": {
      if (!state.anim.running) return state;
      const phase = (state.anim.phase + (action.dtMs / 1000) * state.anim.speed) % 1;
      const next = { ...state, anim: { ...state.anim, phase } };
      return applyRatio(next, ratioAt(next.anim));
    }
    case "load":
      return { ...state, config: cloneConfig(action.config), banner: null };
    case "banner":
      return { ...state, banner: action.message };
    case "reset":
      return initialState();
    default:
      return state;
  }
}

/** All actions a control surface can emit; used by the fuzz test that
 * proves no UI gesture yields a config the server schema rejects. */
export function channelTemplate(slot: number): ChannelConfig {
  return defaultChannel(slot);
}

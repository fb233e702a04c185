/** App bootstrap: wires controls, canvas, server client, address bar and
 * jukebox together. Deliberately thin — behaviour lives in the pure
 * modules (state, url-state, render, jukebox) which carry the tests.
 */

import { Api, ApiError } from "./api.js";
import { cloneConfig, validateConfig } from "./config.js";
import {
  colorFromHex,
  debounce,
  fillSelect,
  hexFromColor,
  numField,
  SelectOption,
} from "./controls.js";
import { Jukebox, JukeboxItem } from "./jukebox.js";
import { drawScene, Scene } from "./render.js";
import { Action, initialState, reduce, UiState } from "./state.js";
import {
  CENTER_TYPES,
  ExperimentConfig,
  INFINITE_CENTERS,
  LOCUS_TYPES,
  LocusBlock,
  LocusType,
  REGISTRY_INDICES,
  TRIANGLE_TYPES,
  TriangleType,
} from "./types.js";
import { fromUrl, toUrl } from "./url-state.js";

const api = new Api((input, init) => fetch(input, init));

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

interface LastScene {
  config: ExperimentConfig;
  blocks: LocusBlock[];
  invariants: string;
}

let state: UiState;
let lastScene: LastScene | null = null;
let fetching = false;
let dirty = false;
let jukebox: Jukebox | null = null;

const canvas = byId<HTMLCanvasElement>("canvas");
const ctx = canvas.getContext("2d")!;

// ---------------------------------------------------------------- fetching

type SceneOutcome = "ok" | "superseded" | "error";

async function requestScene(): Promise<SceneOutcome> {
  const snapshot = cloneConfig(state.config);
  let resp;
  try {
    resp = await api.locus(snapshot);
  } catch (err) {
    const msg =
      err instanceof ApiError ? err.messages.join("; ") : `request failed: ${String(err)}`;
    // keep the stale frame; the banner is the only visible change
    applyAction({ type: "banner", message: msg });
    return "error";
  }
  if (resp === null) return "superseded";
  lastScene = { config: snapshot, blocks: resp.channels, invariants: resp.invariants };
  if (state.banner !== null) applyAction({ type: "banner", message: null });
  return "ok";
}

/** Coalesce bursts: at most one request in flight, newest config wins. */
function scheduleScene(): void {
  if (fetching) {
    dirty = true;
    return;
  }
  fetching = true;
  void (async () => {
    do {
      dirty = false;
      await requestScene();
    } while (dirty);
    fetching = false;
  })();
}

const syncUrl = debounce(() => {
  const q = toUrl(state.config);
  history.replaceState(null, "", q === "" ? location.pathname : `?${q}`);
}, 200);

// ------------------------------------------------------------- dispatching

/** Reduce only (used for banner updates inside the fetch path). */
function applyAction(action: Action): void {
  state = reduce(state, action);
}

function dispatch(action: Action): void {
  const before = state.config;
  state = reduce(state, action);
  if (state.config !== before) {
    scheduleScene();
    syncUrl();
  }
  syncControls();
}

// ---------------------------------------------------------------- controls

const familySel = byId<HTMLSelectElement>("family");
const ratioInput = byId<HTMLInputElement>("ratio");
const ratioOut = byId<HTMLElement>("ratio-value");
const auxInput = byId<HTMLInputElement>("aux");
const seedInputs = [1, 2, 3].map((i) => byId<HTMLInputElement>(`seed${i}`));
const samplesInput = byId<HTMLInputElement>("samples");
const rotationSel = byId<HTMLSelectElement>("rotation");
const runBtn = byId<HTMLButtonElement>("run");
const speedInput = byId<HTMLInputElement>("speed");
const resetBtn = byId<HTMLButtonElement>("reset");
const playlistSel = byId<HTMLSelectElement>("playlist");
const jukeOffBtn = byId<HTMLButtonElement>("juke-off");
const channelsDiv = byId<HTMLDivElement>("channels");

interface ChannelControls {
  locus: HTMLSelectElement;
  center: HTMLSelectElement;
  envM: HTMLSelectElement;
  envN: HTMLSelectElement;
  triangle: HTMLSelectElement;
  color: HTMLInputElement;
  centerRow: HTMLElement;
  envRow: HTMLElement;
}

const channelControls: ChannelControls[] = [];

const CENTER_OPTIONS: SelectOption[] = REGISTRY_INDICES.filter(
  (k) => !INFINITE_CENTERS.includes(k),
).map((k) => ({ value: String(k), label: `X${k}` }));

function row(label: string, child: HTMLElement): HTMLElement {
  const div = document.createElement("div");
  div.className = "row";
  const span = document.createElement("label");
  span.textContent = label;
  div.append(span, child);
  return div;
}

function buildChannelFieldset(slot: number): void {
  const fs = document.createElement("fieldset");
  const legend = document.createElement("legend");
  legend.textContent = `Channel ${slot}`;
  fs.appendChild(legend);

  const locus = document.createElement("select");
  fillSelect(locus, LOCUS_TYPES.map((t) => ({ value: t, label: t })));
  const center = document.createElement("select");
  fillSelect(center, CENTER_OPTIONS);
  const envM = document.createElement("select");
  fillSelect(envM, CENTER_OPTIONS);
  const envN = document.createElement("select");
  fillSelect(envN, CENTER_OPTIONS);
  const triangle = document.createElement("select");
  fillSelect(triangle, TRIANGLE_TYPES.map((t) => ({ value: t, label: t })));
  const color = document.createElement("input");
  color.type = "color";

  const centerRow = row("center", center);
  const envPair = document.createElement("span");
  envPair.append(envM, envN);
  const envRow = row("pair", envPair);

  fs.append(
    row("locus", locus),
    centerRow,
    envRow,
    row("triangle", triangle),
    row("color", color),
  );
  channelsDiv.appendChild(fs);

  locus.addEventListener("change", () =>
    dispatch({ type: "channel", slot, patch: { locus_type: locus.value as LocusType } }),
  );
  center.addEventListener("change", () =>
    dispatch({ type: "channel", slot, patch: { center: Number(center.value) } }),
  );
  const envChange = () =>
    dispatch({
      type: "channel",
      slot,
      patch: { env: [Number(envM.value), Number(envN.value)] },
    });
  envM.addEventListener("change", envChange);
  envN.addEventListener("change", envChange);
  triangle.addEventListener("change", () =>
    dispatch({
      type: "channel",
      slot,
      patch: { triangle_type: triangle.value as TriangleType },
    }),
  );
  color.addEventListener("input", () =>
    dispatch({ type: "channel", slot, patch: { color: colorFromHex(color.value) } }),
  );

  channelControls.push({ locus, center, envM, envN, triangle, color, centerRow, envRow });
}

function syncControls(): void {
  const cfg = state.config;
  familySel.value = cfg.family.kind;
  const ratio = cfg.family.a / cfg.family.b;
  ratioInput.value = ratio.toFixed(2);
  ratioOut.textContent = `a/b = ${ratio.toFixed(2)}`;
  auxInput.value = cfg.family.aux === null ? "" : String(cfg.family.aux);
  seedInputs.forEach((inp, i) => {
    inp.value = cfg.family.seed === null ? "" : String(cfg.family.seed[i]);
  });
  samplesInput.value = String(cfg.samples);
  rotationSel.value = String(cfg.rotation);
  runBtn.textContent = state.anim.running ? "Pause" : "Run";
  speedInput.value = String(state.anim.speed);
  cfg.channels.forEach((ch, i) => {
    const c = channelControls[i];
    if (!c) return;
    c.locus.value = ch.locus_type;
    if (ch.center !== null) c.center.value = String(ch.center);
    if (ch.env !== null) {
      c.envM.value = String(ch.env[0]);
      c.envN.value = String(ch.env[1]);
    }
    c.triangle.value = ch.triangle_type;
    c.color.value = hexFromColor(ch.color);
    c.centerRow.style.display = CENTER_TYPES.includes(ch.locus_type) ? "" : "none";
    c.envRow.style.display = ch.locus_type === "env" ? "" : "none";
  });
}

function wireControls(): void {
  familySel.addEventListener("change", () =>
    dispatch({ type: "family", kind: familySel.value }),
  );
  const ratioChange = debounce(() => {
    dispatch({ type: "ratio", value: Number(ratioInput.value) });
  }, 30);
  ratioInput.addEventListener("input", ratioChange);
  auxInput.addEventListener("change", () => {
    const v = numField(auxInput.value);
    if (v === undefined || (v !== null && v <= 0)) {
      syncControls(); // revert the field; never send an invalid aux
      return;
    }
    dispatch({ type: "aux", value: v });
  });
  const seedChange = () => {
    const vals = seedInputs.map((inp) => numField(inp.value));
    if (vals.every((v) => v === null)) {
      dispatch({ type: "seed", value: null });
      return;
    }
    if (vals.some((v) => v === undefined || v === null || v <= 0)) {
      syncControls();
      return;
    }
    dispatch({ type: "seed", value: vals as [number, number, number] });
  };
  seedInputs.forEach((inp) => inp.addEventListener("change", seedChange));
  samplesInput.addEventListener("change", () => {
    const v = numField(samplesInput.value);
    if (v === undefined || v === null) {
      syncControls();
      return;
    }
    dispatch({ type: "samples", value: v });
  });
  rotationSel.addEventListener("change", () =>
    dispatch({ type: "rotation", value: Number(rotationSel.value) }),
  );
  runBtn.addEventListener("click", () =>
    dispatch({ type: "anim", patch: { running: !state.anim.running } }),
  );
  speedInput.addEventListener("input", () =>
    dispatch({ type: "anim", patch: { speed: Number(speedInput.value) } }),
  );
  resetBtn.addEventListener("click", () => {
    stopJukebox();
    dispatch({ type: "reset" });
  });

  window.addEventListener("keydown", (ev) => {
    if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) {
      return;
    }
    const step = 1 / 64;
    if (ev.key === "ArrowRight" || ev.key === "ArrowUp") {
      dispatch({ type: "step", delta: step });
      ev.preventDefault();
    } else if (ev.key === "ArrowLeft" || ev.key === "ArrowDown") {
      dispatch({ type: "step", delta: -step });
      ev.preventDefault();
    }
  });

  canvas.addEventListener("click", () => {
    if (jukebox?.running) void jukebox.next();
  });
  canvas.addEventListener("contextmenu", (ev) => {
    if (jukebox?.running) {
      ev.preventDefault();
      void jukebox.prev();
    }
  });
}

// ----------------------------------------------------------------- jukebox

function stopJukebox(): void {
  jukebox?.stop();
  jukebox = null;
  playlistSel.value = "";
}

async function showJukeItem(item: JukeboxItem): Promise<boolean> {
  if (validateConfig(item.config).length > 0) return false;
  dispatch({ type: "load", config: item.config });
  // dispatch queued the fetch; wait for the burst loop to settle
  while (fetching) await new Promise((r) => setTimeout(r, 25));
  return state.banner === null;
}

function wireJukebox(
  playlists: { name: string; items: { caption: string; config: ExperimentConfig }[] }[],
): void {
  const options: SelectOption[] = [
    { value: "", label: "(pick a playlist)" },
    ...playlists.map((p) => ({ value: p.name, label: p.name })),
  ];
  fillSelect(playlistSel, options, "");
  playlistSel.addEventListener("change", () => {
    jukebox?.stop();
    jukebox = null;
    const pl = playlists.find((p) => p.name === playlistSel.value);
    if (!pl) return;
    const items: JukeboxItem[] = pl.items.map((it) => ({
      title: it.caption,
      config: it.config,
    }));
    jukebox = new Jukebox(items, showJukeItem);
    void jukebox.start();
  });
  jukeOffBtn.addEventListener("click", stopJukebox);
}

// ------------------------------------------------------------- render loop

let lastFrame = performance.now();

function frame(now: number): void {
  const dt = Math.min(now - lastFrame, 200); // clamp long frames
  lastFrame = now;
  if (state.anim.running) dispatch({ type: "tick", dtMs: dt });
  const scene: Scene = lastScene
    ? {
        config: lastScene.config,
        blocks: lastScene.blocks,
        invariants: lastScene.invariants,
        banner: state.banner,
      }
    : { config: state.config, blocks: [], invariants: "", banner: state.banner };
  drawScene(ctx, canvas.width, canvas.height, scene);
  requestAnimationFrame(frame);
}

// -------------------------------------------------------------------- boot

function initialConfigFromLocation(): { config: ExperimentConfig; warning: string | null } {
  const query = location.search;
  try {
    // lenient: hand-edited URLs with a<b are swapped and rotated
    return { config: fromUrl(query, false), warning: null };
  } catch (err) {
    return {
      config: fromUrl(""),
      warning: `could not read the shared scene (${String(
        err instanceof Error ? err.message : err,
      )}); showing the default`,
    };
  }
}

async function boot(): Promise<void> {
  const { config, warning } = initialConfigFromLocation();
  state = initialState(config);
  if (warning !== null) applyAction({ type: "banner", message: warning });

  for (const slot of [1, 2, 3, 4]) buildChannelFieldset(slot);
  wireControls();

  try {
    const fams = await api.families();
    const kinds = [...fams.families.map((f) => f.kind), ...fams.mounted.kinds];
    fillSelect(
      familySel,
      kinds.map((k) => ({ value: k, label: k })),
      state.config.family.kind,
    );
  } catch (err) {
    applyAction({ type: "banner", message: `family list unavailable: ${String(err)}` });
  }
  try {
    const pls = await api.playlists();
    wireJukebox(
      pls.playlists.map((p) => ({
        name: p.name,
        items: p.items.map((it) => {
          const { version: _v, ...cfg } = it.config;
          return { caption: it.caption, config: cfg as ExperimentConfig };
        }),
      })),
    );
  } catch {
    fillSelect(playlistSel, [{ value: "", label: "(no playlists)" }], "");
  }

  syncControls();
  scheduleScene();
  syncUrl();
  requestAnimationFrame((t) => {
    lastFrame = t;
    requestAnimationFrame(frame);
  });
}

void boot();

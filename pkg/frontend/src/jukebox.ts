/** Playlist auto-advance: shows each entry for 5-10 seconds, skips entries
 * the server rejects, and supports manual forward/backward stepping.
 * Timers and randomness are injectable so tests can run synchronously.
 */

import { ExperimentConfig } from "./types.js";

export interface JukeboxOptions {
  minMs?: number;
  maxMs?: number;
  random?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

export interface JukeboxItem {
  title: string;
  config: ExperimentConfig;
}

/** `show` renders one entry; resolving false marks it failed (skip it). */
export type ShowFn = (item: JukeboxItem) => Promise<boolean>;

export class Jukebox {
  private items: JukeboxItem[];
  private show: ShowFn;
  private minMs: number;
  private maxMs: number;
  private random: () => number;
  private setTimer: (fn: () => void, ms: number) => unknown;
  private clearTimer: (handle: unknown) => void;
  private timer: unknown = null;
  private index = -1;
  private generation = 0;
  running = false;

  constructor(items: JukeboxItem[], show: ShowFn, opts: JukeboxOptions = {}) {
    this.items = items;
    this.show = show;
    this.minMs = opts.minMs ?? 5000;
    this.maxMs = opts.maxMs ?? 10000;
    this.random = opts.random ?? Math.random;
    this.setTimer = opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = opts.clearTimer ?? ((h) => clearTimeout(h as number));
  }

  get position(): number {
    return this.index;
  }

  delay(): number {
    return this.minMs + this.random() * (this.maxMs - this.minMs);
  }

  async start(): Promise<void> {
    if (this.running || this.items.length === 0) return;
    this.running = true;
    this.generation++;
    await this.advance(1);
  }

  stop(): void {
    this.running = false;
    this.generation++;
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
  }

  async next(): Promise<void> {
    if (this.running) await this.advance(1);
  }

  async prev(): Promise<void> {
    if (this.running) await this.advance(-1);
  }

  /** Step through entries in `dir` until one renders, then re-arm the timer. */
  private async advance(dir: 1 | -1): Promise<void> {
    const gen = ++this.generation;
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
    const n = this.items.length;
    for (let tried = 0; tried < n; tried++) {
      this.index = (((this.index + dir) % n) + n) % n;
      const item = this.items[this.index]!;
      const ok = await this.show(item);
      if (gen !== this.generation || !this.running) return;
      if (ok) {
        this.timer = this.setTimer(() => {
          this.timer = null;
          void this.advance(1);
        }, this.delay());
        return;
      }
    }
    // every entry failed; give up rather than spin
    this.running = false;
  }
}

/** Small control-surface helpers kept out of the DOM bootstrap so they
 * can be unit tested: debouncing (sliders fire a storm of input events)
 * and <select>/color plumbing. */

import { Color } from "./types.js";

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
  setTimer: (f: () => void, m: number) => unknown = (f, m) => setTimeout(f, m),
  clearTimer: (h: unknown) => void = (h) => clearTimeout(h as number),
): (...args: A) => void {
  let handle: unknown = null;
  return (...args: A) => {
    if (handle !== null) clearTimer(handle);
    handle = setTimer(() => {
      handle = null;
      fn(...args);
    }, ms);
  };
}

export interface SelectOption {
  value: string;
  label: string;
}

export function fillSelect(
  sel: HTMLSelectElement,
  options: readonly SelectOption[],
  value?: string,
): void {
  sel.innerHTML = "";
  for (const opt of options) {
    const o = document.createElement("option");
    o.value = opt.value;
    o.textContent = opt.label;
    sel.appendChild(o);
  }
  if (value !== undefined) sel.value = value;
}

export function hexFromColor(c: Color): string {
  return "#" + c.map((x) => x.toString(16).padStart(2, "0")).join("");
}

export function colorFromHex(hex: string): Color {
  const h = hex.replace(/^#/, "");
  return [
    parseInt(h.slice(0, 2), 16),
    parseInt(h.slice(2, 4), 16),
    parseInt(h.slice(4, 6), 16),
  ];
}

/** Parse a numeric text field; null for blank, undefined for garbage. */
export function numField(raw: string): number | null | undefined {
  const v = raw.trim();
  if (v === "") return null;
  const n = Number(v);
  return Number.isFinite(n) ? n : undefined;
}

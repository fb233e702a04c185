/** Default config construction, deep comparison, and the client-side
 * validator that mirrors the server schema rule for rule — the UI never
 * sends a request the server would reject. */

import {
  CENTER_TYPES,
  CEVIAN_KINDS,
  ChannelConfig,
  Color,
  ExperimentConfig,
  KNOWN_KINDS,
  LOCUS_TYPES,
  PALETTE,
  REGISTRY_INDICES,
  ROTATIONS,
  TRIANGLE_TYPES,
} from "./types.js";

export function defaultChannel(slot: number): ChannelConfig {
  const color = PALETTE[slot] ?? [0, 0, 0];
  return {
    locus_type: slot === 0 ? "xn" : "off",
    triangle_type: "reference",
    center: slot === 0 ? 1 : null,
    cevian: null,
    env: null,
    color: [...color] as Color,
  };
}

/** A bare channel: what a slot resets to when its locus type is overridden
 * from the URL (only the slot's palette color survives). */
export function bareChannel(slot: number): ChannelConfig {
  const color = PALETTE[slot] ?? [0, 0, 0];
  return {
    locus_type: "off",
    triangle_type: "reference",
    center: null,
    cevian: null,
    env: null,
    color: [...color] as Color,
  };
}

export function defaultConfig(): ExperimentConfig {
  return {
    family: { kind: "confocal", a: 1.5, b: 1.0, aux: null, seed: null },
    channels: [defaultChannel(0), defaultChannel(1), defaultChannel(2), defaultChannel(3)],
    samples: 720,
    rmax: 2.0,
    rotation: 0,
    background: [255, 255, 255],
  };
}

export function cloneConfig(cfg: ExperimentConfig): ExperimentConfig {
  return JSON.parse(JSON.stringify(cfg)) as ExperimentConfig;
}

function sameArray(a: readonly unknown[] | null, b: readonly unknown[] | null): boolean {
  if (a === null || b === null) return a === b;
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

export function channelsEqual(p: ChannelConfig, q: ChannelConfig): boolean {
  return (
    p.locus_type === q.locus_type &&
    p.triangle_type === q.triangle_type &&
    p.center === q.center &&
    sameArray(p.cevian, q.cevian) &&
    sameArray(p.env, q.env) &&
    sameArray(p.color, q.color)
  );
}

export function configsEqual(p: ExperimentConfig, q: ExperimentConfig): boolean {
  return (
    p.family.kind === q.family.kind &&
    p.family.a === q.family.a &&
    p.family.b === q.family.b &&
    p.family.aux === q.family.aux &&
    sameArray(p.family.seed, q.family.seed) &&
    p.channels.every((ch, i) => channelsEqual(ch, q.channels[i]!)) &&
    p.samples === q.samples &&
    p.rmax === q.rmax &&
    p.rotation === q.rotation &&
    sameArray(p.background, q.background)
  );
}

function isColor(v: unknown): v is Color {
  return (
    Array.isArray(v) &&
    v.length === 3 &&
    v.every((c) => Number.isInteger(c) && c >= 0 && c <= 255)
  );
}

function positiveFinite(v: number): boolean {
  return Number.isFinite(v) && v > 0;
}

function registered(k: number): boolean {
  return REGISTRY_INDICES.includes(k);
}

/** One "path: message" per violation; empty means the server accepts it. */
export function validateConfig(cfg: ExperimentConfig): string[] {
  const errs: string[] = [];
  const fam = cfg.family;
  if (!KNOWN_KINDS.includes(fam.kind)) {
    errs.push(`family.kind: unknown family kind '${fam.kind}'`);
  }
  if (!positiveFinite(fam.a)) errs.push("family.a: semi-axis must be positive and finite");
  if (!positiveFinite(fam.b)) errs.push("family.b: semi-axis must be positive and finite");
  if (fam.a < fam.b) errs.push("family: a/b >= 1 required (canonical orientation)");
  if (fam.aux !== null && !positiveFinite(fam.aux)) {
    errs.push("family.aux: aux must be positive and finite");
  }
  if (fam.seed !== null) {
    if (fam.seed.length !== 3 || fam.seed.some((s) => !positiveFinite(s))) {
      errs.push("family.seed: seed sidelengths must be positive");
    }
  }
  if (cfg.channels.length !== 4) {
    errs.push("channels: exactly four channels required");
  }
  cfg.channels.forEach((ch, i) => {
    const at = `channels.${i}`;
    if (!LOCUS_TYPES.includes(ch.locus_type)) {
      errs.push(`${at}.locus_type: unknown locus type '${ch.locus_type}'`);
    }
    if (!TRIANGLE_TYPES.includes(ch.triangle_type)) {
      errs.push(`${at}.triangle_type: unknown triangle type '${ch.triangle_type}'`);
    }
    if (CENTER_TYPES.includes(ch.locus_type)) {
      if (ch.center === null) {
        errs.push(`${at}: locus_type '${ch.locus_type}' requires a center`);
      } else if (!registered(ch.center)) {
        errs.push(`${at}.center: center X${ch.center} is not in the registry`);
      }
    }
    if (ch.locus_type === "env") {
      if (ch.env === null) {
        errs.push(`${at}: locus_type 'env' requires an (m, n) center pair`);
      } else if (!ch.env.every(registered)) {
        errs.push(`${at}.env: center pair must be registered`);
      }
    }
    if (ch.cevian !== null) {
      const [kind, k] = ch.cevian;
      if (!CEVIAN_KINDS.includes(kind)) {
        errs.push(`${at}.cevian: unknown cevian kind '${kind}'`);
      }
      if (!registered(k)) {
        errs.push(`${at}.cevian: center X${k} is not in the registry`);
      }
    }
    if (!isColor(ch.color)) errs.push(`${at}.color: components must be integers in 0..255`);
  });
  if (!Number.isInteger(cfg.samples) || cfg.samples < 8) {
    errs.push("samples: samples >= 8 required");
  }
  if (!positiveFinite(cfg.rmax)) errs.push("rmax: must be positive and finite");
  if (!(ROTATIONS as readonly number[]).includes(cfg.rotation)) {
    errs.push("rotation: must be one of 0, 90, 180, 270");
  }
  if (!isColor(cfg.background)) {
    errs.push("background: components must be integers in 0..255");
  }
  return errs;
}

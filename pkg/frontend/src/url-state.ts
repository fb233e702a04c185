/** URL query-string codec for configs.
 *
 * Key-for-key mirror of the server's encoding so a URL minted by either
 * side restores the same scene on the other: every default is omitted
 * (the default scene is the empty query), floats keep their shortest
 * round-trip form with a trailing ".0" for whole numbers, and a c<i>
 * override resets slot i to a bare channel before the other per-slot
 * keys apply.
 */

import {
  bareChannel,
  defaultChannel,
  defaultConfig,
  validateConfig,
} from "./config.js";
import {
  CevianKind,
  ChannelConfig,
  Color,
  ExperimentConfig,
  LocusType,
  TriangleType,
} from "./types.js";

export class UrlParseError extends Error {}
export class UrlValidationError extends Error {}

/** Shortest round-trip float form, whole numbers as "2.0". */
export function fnum(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e16) return v.toFixed(1);
  // pad single-digit exponents ("1e-7" -> "1e-07") to match the server
  return String(v).replace(/e([+-])(\d)$/, "e$10$2");
}

function hexColor(c: Color): string {
  return c.map((x) => x.toString(16).padStart(2, "0")).join("");
}

const FLOAT_RE = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;
const INT_RE = /^[+-]?\d+$/;

function parseFloatStrict(v: string, key: string): number {
  if (!FLOAT_RE.test(v)) {
    throw new UrlParseError(`${key}: expected a number, got '${v}'`);
  }
  return Number(v);
}

function parseIntStrict(v: string, key: string): number {
  if (!INT_RE.test(v)) {
    throw new UrlParseError(`${key}: expected an integer, got '${v}'`);
  }
  return Number(v);
}

function parseHexColor(v: string, key: string): Color {
  if (!/^[0-9a-fA-F]{6}$/.test(v)) {
    throw new UrlParseError(`${key}: expected rrggbb hex color, got '${v}'`);
  }
  return [
    parseInt(v.slice(0, 2), 16),
    parseInt(v.slice(2, 4), 16),
    parseInt(v.slice(4, 6), 16),
  ];
}

function quoteValue(v: string): string {
  return encodeURIComponent(v).replace(/%2C/gi, ",").replace(/%3A/gi, ":");
}

export function toUrl(cfg: ExperimentConfig): string {
  const d = defaultConfig();
  const pairs: [string, string][] = [];
  const fam = cfg.family;
  if (fam.kind !== d.family.kind) pairs.push(["f", fam.kind]);
  if (fam.a !== d.family.a) pairs.push(["a", fnum(fam.a)]);
  if (fam.b !== d.family.b) pairs.push(["b", fnum(fam.b)]);
  if (fam.aux !== null) pairs.push(["aux", fnum(fam.aux)]);
  if (fam.seed !== null) pairs.push(["seed", fam.seed.map(fnum).join(",")]);
  cfg.channels.forEach((ch, idx) => {
    const i = idx + 1;
    const dch = defaultChannel(idx);
    let base: ChannelConfig;
    if (ch.locus_type !== dch.locus_type) {
      pairs.push([`c${i}`, ch.locus_type]);
      base = bareChannel(idx);
    } else {
      base = dch;
    }
    if (ch.center !== base.center && ch.center !== null) {
      pairs.push([`x${i}`, String(ch.center)]);
    }
    if (ch.triangle_type !== base.triangle_type) {
      pairs.push([`t${i}`, ch.triangle_type]);
    }
    if (ch.cevian !== null) {
      pairs.push([`cv${i}`, `${ch.cevian[0]}:${ch.cevian[1]}`]);
    }
    if (ch.env !== null) {
      pairs.push([`e${i}`, `${ch.env[0]}:${ch.env[1]}`]);
    }
    if (hexColor(ch.color) !== hexColor(dch.color)) {
      pairs.push([`col${i}`, hexColor(ch.color)]);
    }
  });
  if (cfg.samples !== d.samples) pairs.push(["smp", String(cfg.samples)]);
  if (cfg.rmax !== d.rmax) pairs.push(["rmax", fnum(cfg.rmax)]);
  if (cfg.rotation !== d.rotation) pairs.push(["rot", String(cfg.rotation)]);
  if (hexColor(cfg.background) !== hexColor(d.background)) {
    pairs.push(["bg", hexColor(cfg.background)]);
  }
  return pairs.map(([k, v]) => `${k}=${quoteValue(v)}`).join("&");
}

function splitQuery(query: string): Map<string, string> {
  const seen = new Map<string, string>();
  for (const part of query.split("&")) {
    if (part === "") throw new UrlParseError("malformed query string");
    const eq = part.indexOf("=");
    if (eq <= 0) throw new UrlParseError("malformed query string");
    const key = decodeURIComponent(part.slice(0, eq).replace(/\+/g, " "));
    const val = decodeURIComponent(part.slice(eq + 1).replace(/\+/g, " "));
    if (seen.has(key)) throw new UrlParseError(`duplicate key '${key}' in query`);
    seen.set(key, val);
  }
  return seen;
}

export function fromUrl(query: string, strict = true): ExperimentConfig {
  query = query.replace(/^\?+/, "");
  if (query === "") return defaultConfig();
  const seen = splitQuery(query);

  const cfg = defaultConfig();
  // A c<i> override resets that slot to a bare channel (slot color kept).
  for (let i = 0; i < 4; i++) {
    if (seen.has(`c${i + 1}`)) cfg.channels[i] = bareChannel(i);
  }
  if (seen.has("ab")) {
    if (seen.has("a") || seen.has("b")) {
      throw new UrlParseError("ab is shorthand for a with b=1; do not mix with a/b keys");
    }
    cfg.family.a = parseFloatStrict(seen.get("ab")!, "ab");
    cfg.family.b = 1.0;
    seen.delete("ab");
  }
  for (const [key, val] of seen) {
    if (key === "f") cfg.family.kind = val;
    else if (key === "a") cfg.family.a = parseFloatStrict(val, key);
    else if (key === "b") cfg.family.b = parseFloatStrict(val, key);
    else if (key === "aux") cfg.family.aux = parseFloatStrict(val, key);
    else if (key === "seed") {
      const parts = val.split(",");
      if (parts.length !== 3) {
        throw new UrlParseError(`seed: expected s1,s2,s3, got '${val}'`);
      }
      cfg.family.seed = [
        parseFloatStrict(parts[0]!, key),
        parseFloatStrict(parts[1]!, key),
        parseFloatStrict(parts[2]!, key),
      ];
    } else if (key === "smp") cfg.samples = parseIntStrict(val, key);
    else if (key === "rmax") cfg.rmax = parseFloatStrict(val, key);
    else if (key === "rot") cfg.rotation = parseIntStrict(val, key);
    else if (key === "bg") cfg.background = parseHexColor(val, key);
    else if (key.length >= 2 && "1234".includes(key[key.length - 1]!)) {
      const i = Number(key[key.length - 1]) - 1;
      const stem = key.slice(0, -1);
      const ch = cfg.channels[i]!;
      if (stem === "c") ch.locus_type = val as LocusType;
      else if (stem === "x") ch.center = parseIntStrict(val, key);
      else if (stem === "t") ch.triangle_type = val as TriangleType;
      else if (stem === "cv") {
        const colon = val.indexOf(":");
        if (colon < 0 || colon === val.length - 1) {
          throw new UrlParseError(`${key}: expected kind:center, got '${val}'`);
        }
        ch.cevian = [
          val.slice(0, colon) as CevianKind,
          parseIntStrict(val.slice(colon + 1), key),
        ];
      } else if (stem === "e") {
        const colon = val.indexOf(":");
        if (colon < 0 || colon === val.length - 1) {
          throw new UrlParseError(`${key}: expected m:n, got '${val}'`);
        }
        ch.env = [
          parseIntStrict(val.slice(0, colon), key),
          parseIntStrict(val.slice(colon + 1), key),
        ];
      } else if (stem === "col") ch.color = parseHexColor(val, key);
      else throw new UrlParseError(`unknown query key '${key}'`);
    } else throw new UrlParseError(`unknown query key '${key}'`);
  }
  if (!strict && cfg.family.a < cfg.family.b) {
    const { a, b } = cfg.family;
    cfg.family.a = b;
    cfg.family.b = a;
    cfg.rotation = (cfg.rotation + 90) % 360;
  }
  const errs = validateConfig(cfg);
  if (errs.length > 0) throw new UrlValidationError(errs.join("; "));
  return cfg;
}

import { describe, expect, it } from "vitest";

import { cloneConfig, defaultConfig } from "../src/config.js";
import {
  fromUrl,
  toUrl,
  UrlParseError,
  UrlValidationError,
} from "../src/url-state.js";
import {
  CevianKind,
  ExperimentConfig,
  LocusType,
  REGISTRY_INDICES,
  TriangleType,
} from "../src/types.js";
import { CODEC_FIXTURES } from "./fixtures.js";

describe("codec fixtures (server-emitted)", () => {
  for (const fx of CODEC_FIXTURES) {
    it(`encodes ${fx.name} byte-for-byte`, () => {
      expect(toUrl(fx.config)).toBe(fx.url);
    });
    it(`decodes ${fx.name}`, () => {
      expect(fromUrl(fx.url)).toEqual(fx.config);
    });
  }
});

describe("toUrl", () => {
  it("emits the empty query for the default scene", () => {
    expect(toUrl(defaultConfig())).toBe("");
  });

  it("omits every field that still holds its default", () => {
    const cfg = defaultConfig();
    cfg.family.a = 3.0;
    cfg.samples = 128;
    expect(toUrl(cfg)).toBe("a=3.0&smp=128");
  });

  it("keeps shortest-round-trip float forms", () => {
    const cfg = defaultConfig();
    cfg.family.a = 1.2000000000000002;
    expect(toUrl(cfg)).toBe("a=1.2000000000000002");
  });
});

describe("fromUrl", () => {
  it("returns the default scene for the empty query", () => {
    expect(fromUrl("")).toEqual(defaultConfig());
    expect(fromUrl("?")).toEqual(defaultConfig());
  });

  it("accepts a leading question mark", () => {
    expect(fromUrl("?a=2.0")).toEqual(fromUrl("a=2.0"));
  });

  it("expands the ab shorthand", () => {
    const cfg = fromUrl("ab=1.8");
    expect(cfg.family.a).toBe(1.8);
    expect(cfg.family.b).toBe(1.0);
  });

  it("rejects ab mixed with explicit axes", () => {
    expect(() => fromUrl("ab=1.8&a=2.0")).toThrow(UrlParseError);
  });

  it("resets a slot before applying its other keys", () => {
    // x1 set on an overridden slot must survive; everything else resets
    const cfg = fromUrl("c1=e1x&x1=7");
    expect(cfg.channels[0].locus_type).toBe("e1x");
    expect(cfg.channels[0].center).toBe(7);
    expect(cfg.channels[0].triangle_type).toBe("reference");
  });

  it("rejects duplicate keys", () => {
    expect(() => fromUrl("a=2.0&a=3.0")).toThrow(UrlParseError);
  });

  it("rejects unknown keys", () => {
    expect(() => fromUrl("teapot=1")).toThrow(UrlParseError);
    expect(() => fromUrl("zz1=1")).toThrow(UrlParseError);
  });

  it("rejects malformed queries", () => {
    expect(() => fromUrl("a==")).toThrow(UrlParseError);
    expect(() => fromUrl("a=2.0&=1")).toThrow(UrlParseError);
    expect(() => fromUrl("a=2.0&&b=1.0")).toThrow(UrlParseError);
  });

  it("rejects non-numeric numbers and bad colors", () => {
    expect(() => fromUrl("a=wide")).toThrow(UrlParseError);
    expect(() => fromUrl("smp=9.5")).toThrow(UrlParseError);
    expect(() => fromUrl("bg=red")).toThrow(UrlParseError);
    expect(() => fromUrl("col1=12345")).toThrow(UrlParseError);
  });

  it("rejects bad seed arity and bad pair syntax", () => {
    expect(() => fromUrl("f=brocard&a=1.0&seed=4.0,5.0")).toThrow(UrlParseError);
    expect(() => fromUrl("c1=env&e1=23")).toThrow(UrlParseError);
    expect(() => fromUrl("cv1=pedal")).toThrow(UrlParseError);
    expect(() => fromUrl("cv1=pedal:")).toThrow(UrlParseError);
  });

  it("validates the decoded scene", () => {
    expect(() => fromUrl("c1=teapot")).toThrow(UrlValidationError);
    expect(() => fromUrl("smp=4")).toThrow(UrlValidationError);
    expect(() => fromUrl("x1=21")).toThrow(UrlValidationError); // unregistered
    expect(() => fromUrl("f=klein")).toThrow(UrlValidationError);
  });

  it("rejects a<b in strict mode, swaps and rotates in lenient mode", () => {
    expect(() => fromUrl("a=1.0&b=2.0")).toThrow(UrlValidationError);
    const cfg = fromUrl("a=1.0&b=2.0", false);
    expect(cfg.family.a).toBe(2.0);
    expect(cfg.family.b).toBe(1.0);
    expect(cfg.rotation).toBe(90);
    const wrapped = fromUrl("a=1.0&b=2.0&rot=270", false);
    expect(wrapped.rotation).toBe(0);
  });
});

describe("round trips", () => {
  function mulberry32(seed: number): () => number {
    let s = seed >>> 0;
    return () => {
      s = (s + 0x6d2b79f5) >>> 0;
      let t = s;
      t = Math.imul(t ^ (t >>> 15), t | 1);
      t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
      return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
  }

  function pick<T>(rng: () => number, xs: readonly T[]): T {
    return xs[Math.floor(rng() * xs.length)]!;
  }

  function randomConfig(rng: () => number): ExperimentConfig {
    const cfg = defaultConfig();
    cfg.family.kind = pick(rng, [
      "confocal", "incircle", "circumcircle", "homothetic", "dual",
      "poristic", "brocard", "excentral", "mounted:major", "mounted:fs",
    ]);
    cfg.family.b = 0.5 + Math.round(rng() * 200) / 100;
    cfg.family.a = cfg.family.b * (1 + Math.round(rng() * 300) / 100);
    if (rng() < 0.3) cfg.family.aux = 0.25 + Math.round(rng() * 100) / 100;
    if (rng() < 0.3) {
      const s1 = 3 + Math.round(rng() * 100) / 50;
      cfg.family.seed = [s1, s1 + 1, s1 + 2];
    }
    const locusTypes: LocusType[] = [
      "off", "xn", "v1", "v2", "v3", "env", "e12", "e23", "e31",
      "e1x", "e2x", "e3x", "omega1", "omega2",
    ];
    const triangles: TriangleType[] = [
      "reference", "medial", "orthic", "excentral", "intouch",
      "extouch", "tangential", "anticomplementary",
    ];
    const cevians: CevianKind[] = [
      "cevian", "anticevian", "circumcevian", "pedal", "antipedal",
    ];
    cfg.channels.forEach((ch) => {
      ch.locus_type = pick(rng, locusTypes);
      ch.triangle_type = pick(rng, triangles);
      if (["xn", "e1x", "e2x", "e3x"].includes(ch.locus_type)) {
        ch.center = pick(rng, REGISTRY_INDICES);
      }
      if (ch.locus_type === "env") {
        ch.env = [pick(rng, REGISTRY_INDICES), pick(rng, REGISTRY_INDICES)];
      }
      if (rng() < 0.2) ch.cevian = [pick(rng, cevians), pick(rng, REGISTRY_INDICES)];
      ch.color = [
        Math.floor(rng() * 256),
        Math.floor(rng() * 256),
        Math.floor(rng() * 256),
      ];
    });
    cfg.samples = 8 + Math.floor(rng() * 2000);
    cfg.rmax = 0.5 + Math.round(rng() * 400) / 100;
    cfg.rotation = pick(rng, [0, 90, 180, 270]);
    cfg.background = [
      Math.floor(rng() * 256),
      Math.floor(rng() * 256),
      Math.floor(rng() * 256),
    ];
    return cfg;
  }

  it("url -> config -> url is the identity on 300 random scenes", () => {
    const rng = mulberry32(20260816);
    for (let i = 0; i < 300; i++) {
      const cfg = randomConfig(rng);
      const url = toUrl(cfg);
      const back = fromUrl(url);
      expect(back).toEqual(cfg);
      expect(toUrl(back)).toBe(url);
    }
  });

  it("does not mutate its input", () => {
    const cfg = defaultConfig();
    cfg.family.a = 2.5;
    const copy = cloneConfig(cfg);
    toUrl(cfg);
    expect(cfg).toEqual(copy);
  });
});

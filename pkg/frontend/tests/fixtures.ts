/** Frozen codec fixtures: URL strings and config JSON emitted by the
 * server for eight representative scenes. The client codec must agree
 * byte for byte on the URLs and field for field on the configs, so these
 * are written out literally (no helpers from src/ — the fixtures must
 * not depend on the code they test). */

import { ChannelConfig, Color, ExperimentConfig } from "../src/types.js";

function off(color: Color): ChannelConfig {
  return {
    locus_type: "off",
    triangle_type: "reference",
    center: null,
    cevian: null,
    env: null,
    color,
  };
}

function x1(color: Color): ChannelConfig {
  return {
    locus_type: "xn",
    triangle_type: "reference",
    center: 1,
    cevian: null,
    env: null,
    color,
  };
}

export interface CodecFixture {
  name: string;
  url: string;
  config: ExperimentConfig;
}

export const CODEC_FIXTURES: CodecFixture[] = [
  {
    name: "default",
    url: "",
    config: {
      family: { kind: "confocal", a: 1.5, b: 1.0, aux: null, seed: null },
      channels: [x1([228, 26, 28]), off([55, 126, 184]), off([77, 175, 74]), off([152, 78, 163])],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "confocal_wide",
    url: "a=2.0",
    config: {
      family: { kind: "confocal", a: 2.0, b: 1.0, aux: null, seed: null },
      channels: [x1([228, 26, 28]), off([55, 126, 184]), off([77, 175, 74]), off([152, 78, 163])],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "poristic",
    url: "f=poristic&a=1.0&aux=0.3",
    config: {
      family: { kind: "poristic", a: 1.0, b: 1.0, aux: 0.3, seed: null },
      channels: [x1([228, 26, 28]), off([55, 126, 184]), off([77, 175, 74]), off([152, 78, 163])],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "brocard_seeded",
    url: "f=brocard&a=1.0&seed=4.0,5.0,6.0",
    config: {
      family: { kind: "brocard", a: 1.0, b: 1.0, aux: null, seed: [4.0, 5.0, 6.0] },
      channels: [x1([228, 26, 28]), off([55, 126, 184]), off([77, 175, 74]), off([152, 78, 163])],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "mounted",
    url: "f=mounted:fs&a=2.0",
    config: {
      family: { kind: "mounted:fs", a: 2.0, b: 1.0, aux: null, seed: null },
      channels: [x1([228, 26, 28]), off([55, 126, 184]), off([77, 175, 74]), off([152, 78, 163])],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "four_channel_fig",
    url: "c2=xn&x2=2&c3=xn&x3=3&c4=xn&x4=4",
    config: {
      family: { kind: "confocal", a: 1.5, b: 1.0, aux: null, seed: null },
      channels: [
        x1([228, 26, 28]),
        { ...x1([55, 126, 184]), center: 2 },
        { ...x1([77, 175, 74]), center: 3 },
        { ...x1([152, 78, 163]), center: 4 },
      ],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
  {
    name: "derived_cevian",
    url:
      "f=circumcircle&a=1.0&aux=2.0&x1=3&t1=orthic&cv1=pedal:2" +
      "&c2=env&e2=2:3&col2=0080ff&c3=e1x&x3=5&c4=omega1" +
      "&smp=240&rmax=3.0&rot=90&bg=101018",
    config: {
      family: { kind: "circumcircle", a: 1.0, b: 1.0, aux: 2.0, seed: null },
      channels: [
        {
          locus_type: "xn",
          triangle_type: "orthic",
          center: 3,
          cevian: ["pedal", 2],
          env: null,
          color: [228, 26, 28],
        },
        {
          locus_type: "env",
          triangle_type: "reference",
          center: null,
          cevian: null,
          env: [2, 3],
          color: [0, 128, 255],
        },
        {
          locus_type: "e1x",
          triangle_type: "reference",
          center: 5,
          cevian: null,
          env: null,
          color: [77, 175, 74],
        },
        {
          locus_type: "omega1",
          triangle_type: "reference",
          center: null,
          cevian: null,
          env: null,
          color: [152, 78, 163],
        },
      ],
      samples: 240,
      rmax: 3.0,
      rotation: 90,
      background: [16, 16, 24],
    },
  },
  {
    name: "slot_reset",
    url: "c1=v2",
    config: {
      family: { kind: "confocal", a: 1.5, b: 1.0, aux: null, seed: null },
      channels: [
        { ...off([228, 26, 28]), locus_type: "v2" },
        off([55, 126, 184]),
        off([77, 175, 74]),
        off([152, 78, 163]),
      ],
      samples: 720,
      rmax: 2.0,
      rotation: 0,
      background: [255, 255, 255],
    },
  },
];

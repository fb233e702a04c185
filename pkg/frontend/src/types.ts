/** Config schema mirror: types and enumerations shared with the server. */

export type Color = [number, number, number];

export type LocusType =
  | "off" | "xn" | "v1" | "v2" | "v3" | "env"
  | "e12" | "e23" | "e31" | "e1x" | "e2x" | "e3x"
  | "omega1" | "omega2";

export type TriangleType =
  | "reference" | "medial" | "orthic" | "excentral" | "intouch"
  | "extouch" | "tangential" | "anticomplementary";

export type CevianKind =
  | "cevian" | "anticevian" | "circumcevian" | "pedal" | "antipedal";

export interface ChannelConfig {
  locus_type: LocusType;
  triangle_type: TriangleType;
  center: number | null;
  cevian: [CevianKind, number] | null;
  env: [number, number] | null;
  color: Color;
}

export interface FamilyParamsConfig {
  kind: string;
  a: number;
  b: number;
  aux: number | null;
  seed: [number, number, number] | null;
}

export interface ExperimentConfig {
  family: FamilyParamsConfig;
  channels: [ChannelConfig, ChannelConfig, ChannelConfig, ChannelConfig];
  samples: number;
  rmax: number;
  rotation: number;
  background: Color;
}

export const SCHEMA_VERSION = 1;

export const FAMILY_KINDS = [
  "confocal", "incircle", "circumcircle", "homothetic", "dual",
  "poristic", "brocard", "excentral",
] as const;

export const MOUNTED_PINS = ["major", "minor", "mixed", "fs", "fsCtr"] as const;

export const KNOWN_KINDS: readonly string[] = [
  ...FAMILY_KINDS,
  ...MOUNTED_PINS.map((p) => `mounted:${p}`),
];

export const LOCUS_TYPES: readonly LocusType[] = [
  "off", "xn", "v1", "v2", "v3", "env", "e12", "e23", "e31",
  "e1x", "e2x", "e3x", "omega1", "omega2",
];

/** Locus types whose target is a single registry center. */
export const CENTER_TYPES: readonly LocusType[] = ["xn", "e1x", "e2x", "e3x"];

export const TRIANGLE_TYPES: readonly TriangleType[] = [
  "reference", "medial", "orthic", "excentral", "intouch",
  "extouch", "tangential", "anticomplementary",
];

export const CEVIAN_KINDS: readonly CevianKind[] = [
  "cevian", "anticevian", "circumcevian", "pedal", "antipedal",
];

/** Registry indices the server ships. */
export const REGISTRY_INDICES: readonly number[] = [
  1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20,
  39, 55, 57, 63, 100, 511, 512,
];

/** Registry entries that are points at infinity: valid schema-wise but
 * never evaluable, so the UI does not offer them. */
export const INFINITE_CENTERS: readonly number[] = [511, 512];

export const ROTATIONS = [0, 90, 180, 270] as const;

export const PALETTE: readonly Color[] = [
  [228, 26, 28], [55, 126, 184], [77, 175, 74], [152, 78, 163],
];

/** Server response shapes (POST /api/locus, GET /api/families|playlists). */
export interface LocusBlock {
  slot: number;
  label: string;
  class: string;
  points: [number, number][];
  skipped: number[];
}

export interface LocusResponse {
  version: number;
  config: { version: number } & ExperimentConfig;
  url: string;
  channels: LocusBlock[];
  invariants: string;
}

export interface FamilyDescriptor {
  kind: string;
  params: Record<string, string>;
  fixed_centers: { index: number; label: string; name: string }[];
}

export interface FamiliesResponse {
  version: number;
  families: FamilyDescriptor[];
  mounted: {
    kinds: string[];
    pins: string[];
    params: Record<string, string>;
    fixed_centers: unknown[];
  };
}

export interface PlaylistItemPayload {
  caption: string;
  config: { version: number } & ExperimentConfig;
}

export interface PlaylistsResponse {
  version: number;
  playlists: { name: string; items: PlaylistItemPayload[] }[];
}

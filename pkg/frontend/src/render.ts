/** Canvas scene drawing: per-channel polylines, curve-class badges, the
 * conserved-quantity line, and a non-blocking error banner.
 *
 * The world-to-screen projection mirrors the server's SVG export: the
 * visible half-extents are rmax-times the outer semi-axes (swapped when
 * the scene is rotated a quarter turn), and the y axis points up.
 */

import { Color, ExperimentConfig, LocusBlock } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export function rotatePoint(x: number, y: number, rotation: number): Point {
  switch (rotation) {
    case 90:
      return { x: -y, y: x };
    case 180:
      return { x: -x, y: -y };
    case 270:
      return { x: y, y: -x };
    default:
      return { x, y };
  }
}

/** Half-extents of the visible world rectangle. */
export function viewExtents(cfg: ExperimentConfig): { hw: number; hh: number } {
  let hw = cfg.rmax * cfg.family.a;
  let hh = cfg.rmax * cfg.family.b;
  if (cfg.rotation === 90 || cfg.rotation === 270) {
    [hw, hh] = [hh, hw];
  }
  return { hw, hh };
}

export type Project = (x: number, y: number) => [number, number];

/** World -> pixel projection preserving aspect, y up. */
export function projector(cfg: ExperimentConfig, width: number, height: number): Project {
  const { hw, hh } = viewExtents(cfg);
  const scale = Math.min(width / (2 * hw), height / (2 * hh));
  return (x, y) => {
    const p = rotatePoint(x, y, cfg.rotation);
    return [width / 2 + p.x * scale, height / 2 - p.y * scale];
  };
}

export function badgeText(block: LocusBlock): string {
  return `${block.label}(${block.class})`;
}

export function cssColor(c: Color): string {
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

/** The 2D-context subset the renderer touches (injectable for tests). */
export interface Ctx2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Scene {
  config: ExperimentConfig;
  blocks: LocusBlock[];
  invariants: string;
  banner: string | null;
}

export function drawScene(ctx: Ctx2D, width: number, height: number, scene: Scene): void {
  const cfg = scene.config;
  ctx.fillStyle = cssColor(cfg.background);
  ctx.fillRect(0, 0, width, height);
  const project = projector(cfg, width, height);

  for (const block of scene.blocks) {
    const color = cfg.channels[block.slot - 1]?.color ?? [0, 0, 0];
    ctx.strokeStyle = cssColor(color);
    ctx.fillStyle = cssColor(color);
    ctx.lineWidth = 1.5;
    if (block.points.length === 0) continue;
    if (block.class === "*") {
      const [sx, sy] = project(block.points[0]![0], block.points[0]![1]);
      ctx.beginPath();
      ctx.arc(sx, sy, 3, 0, 2 * Math.PI);
      ctx.fill();
    } else {
      ctx.beginPath();
      const [x0, y0] = project(block.points[0]![0], block.points[0]![1]);
      ctx.moveTo(x0, y0);
      for (let i = 1; i < block.points.length; i++) {
        const [sx, sy] = project(block.points[i]![0], block.points[i]![1]);
        ctx.lineTo(sx, sy);
      }
      ctx.stroke();
    }
    const [bx, by] = project(block.points[0]![0], block.points[0]![1]);
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(badgeText(block), bx + 6, by - 6);
  }

  // conserved quantities along the bottom edge
  ctx.fillStyle = "rgb(40,40,40)";
  ctx.font = "13px system-ui, sans-serif";
  ctx.fillText(scene.invariants, 8, height - 10);

  if (scene.banner !== null) {
    ctx.fillStyle = "rgba(180,30,30,0.9)";
    ctx.fillRect(0, 0, width, 24);
    ctx.fillStyle = "rgb(255,255,255)";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(scene.banner, 8, 16);
  }
}

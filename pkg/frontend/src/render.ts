// Pure scene construction: FramePacket + viewport -> drawable description.
// The task area takes the upper ~2/3 of the screen; the road, car model
// and maneuver symbol live in the lower strip (the covert-attention band).

import type { FramePacket } from "./protocol.js";

export type Viewport = { width: number; height: number };
export type Rect = { x: number; y: number; width: number; height: number };
export type ScreenPoint = { sx: number; sy: number };

export type SceneDescription = {
  layout: { taskArea: Rect; strip: Rect };
  road: ScreenPoint[];
  symbol: { visible: boolean; sx: number; sy: number };
  car: { visible: boolean; sx: number; sy: number; brake: boolean };
  hud: { speed: number; accel: number; bend: number; t: number };
};

export const TASK_AREA_FRACTION = 0.66;

export function renderFrame(packet: FramePacket, viewport: Viewport): SceneDescription {
  const stripTop = viewport.height * TASK_AREA_FRACTION;
  const strip: Rect = {
    x: 0,
    y: stripTop,
    width: viewport.width,
    height: viewport.height - stripTop,
  };
  const taskArea: Rect = { x: 0, y: 0, width: viewport.width, height: stripTop };

  const centerX = viewport.width / 2;
  const maxY = Math.max(1, ...packet.control_points.map((p) => p.y));
  // Full-scale lateral deflection (|x| = maxY) reaches the strip edge;
  // positive x lands screen-right, matching the bend sign convention.
  const xScale = viewport.width / (2 * maxY);
  const road: ScreenPoint[] = packet.control_points.map((p) => ({
    sx: centerX + p.x * xScale,
    sy: strip.y + strip.height - (p.y / maxY) * strip.height,
  }));

  return {
    layout: { taskArea, strip },
    road,
    symbol: {
      visible: packet.prompt_on,
      sx: centerX - viewport.width * 0.18,
      sy: strip.y + strip.height * 0.75,
    },
    car: {
      visible: packet.camera_mode === "third_person",
      sx: centerX,
      sy: strip.y + strip.height * 0.85,
      brake: packet.brake_light,
    },
    hud: {
      speed: packet.scene_speed,
      accel: packet.scene_accel,
      bend: packet.bend_g,
      t: packet.t,
    },
  };
}

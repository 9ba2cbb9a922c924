// Canvas drawing of a SceneDescription. Everything here is presentation
// only; the geometry was fixed by renderFrame.

import type { SceneDescription } from "./render.js";

const COLORS = {
  task: "#10141c",
  strip: "#1d2433",
  road: "#cfd8e3",
  roadEdge: "#5d6b82",
  symbol: "#ffd23f",
  car: "#8fa3bf",
  brake: "#ff4d4d",
  hud: "#9fb2cc",
};

export function drawScene(ctx: CanvasRenderingContext2D, scene: SceneDescription): void {
  const { taskArea, strip } = scene.layout;

  ctx.fillStyle = COLORS.task;
  ctx.fillRect(taskArea.x, taskArea.y, taskArea.width, taskArea.height);
  ctx.fillStyle = COLORS.strip;
  ctx.fillRect(strip.x, strip.y, strip.width, strip.height);

  if (scene.road.length > 1) {
    ctx.strokeStyle = COLORS.road;
    ctx.lineWidth = 3;
    ctx.beginPath();
    const first = scene.road[0]!;
    ctx.moveTo(first.sx, first.sy);
    for (const point of scene.road.slice(1)) ctx.lineTo(point.sx, point.sy);
    ctx.stroke();
  }

  if (scene.car.visible) {
    const w = 26;
    const h = 44;
    ctx.fillStyle = COLORS.car;
    ctx.fillRect(scene.car.sx - w / 2, scene.car.sy - h / 2, w, h);
    if (scene.car.brake) {
      ctx.fillStyle = COLORS.brake;
      ctx.fillRect(scene.car.sx - w / 2, scene.car.sy + h / 2 - 7, w, 7);
    }
  }

  if (scene.symbol.visible) {
    // directional chevron in the covert-attention band
    ctx.fillStyle = COLORS.symbol;
    ctx.beginPath();
    ctx.moveTo(scene.symbol.sx - 14, scene.symbol.sy - 12);
    ctx.lineTo(scene.symbol.sx + 14, scene.symbol.sy);
    ctx.lineTo(scene.symbol.sx - 14, scene.symbol.sy + 12);
    ctx.closePath();
    ctx.fill();
  }

  ctx.fillStyle = COLORS.hud;
  ctx.font = "14px monospace";
  ctx.fillText(
    `v=${scene.hud.speed.toFixed(1)} m/s  a=${scene.hud.accel.toFixed(2)} m/s²  ` +
      `g=${scene.hud.bend.toFixed(3)}`,
    strip.x + 12,
    strip.y + 20,
  );
}

// Wire protocol shared with the session server: newline-delimited JSON.
// Server -> client: {"type":"frame", ...} | {"type":"error", ...}
// Client -> server: {"type":"control", throttle, steer} | {"type":"ms", eye, head, stomach}

export type RoadPoint = { y: number; x: number };

export type FramePacket = {
  seq: number;
  t: number;
  scene_speed: number;
  scene_accel: number;
  bend_g: number;
  control_points: RoadPoint[];
  prompt_on: boolean;
  brake_light: boolean;
  camera_mode: "first_person" | "third_person";
};

export type ServerMessage =
  | { kind: "frame"; frame: FramePacket }
  | { kind: "error"; reason: string };

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);
const isBool = (v: unknown): v is boolean => typeof v === "boolean";

function toFrame(obj: Record<string, unknown>): FramePacket | null {
  const points = obj.control_points;
  if (
    !isNum(obj.seq) ||
    !isNum(obj.t) ||
    !isNum(obj.scene_speed) ||
    !isNum(obj.scene_accel) ||
    !isNum(obj.bend_g) ||
    !isBool(obj.prompt_on) ||
    !isBool(obj.brake_light) ||
    (obj.camera_mode !== "first_person" && obj.camera_mode !== "third_person") ||
    !Array.isArray(points)
  ) {
    return null;
  }
  const controlPoints: RoadPoint[] = [];
  for (const p of points) {
    const q = p as Record<string, unknown>;
    if (!isNum(q.y) || !isNum(q.x)) return null;
    controlPoints.push({ y: q.y, x: q.x });
  }
  return {
    seq: obj.seq,
    t: obj.t,
    scene_speed: obj.scene_speed,
    scene_accel: obj.scene_accel,
    bend_g: obj.bend_g,
    control_points: controlPoints,
    prompt_on: obj.prompt_on,
    brake_light: obj.brake_light,
    camera_mode: obj.camera_mode,
  };
}

/** Parse one server line; malformed input yields null (caller drops it). */
export function parseServerLine(line: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const rec = obj as Record<string, unknown>;
  if (rec.type === "frame") {
    const frame = toFrame(rec);
    return frame ? { kind: "frame", frame } : null;
  }
  if (rec.type === "error") {
    return { kind: "error", reason: String(rec.reason ?? "unknown") };
  }
  return null;
}

export function encodeControlMessage(throttle: number, steer: number): string {
  return JSON.stringify({ type: "control", throttle, steer }) + "\n";
}

export function encodeMsMessage(eye: number, head: number, stomach: number): string {
  return JSON.stringify({ type: "ms", eye, head, stomach }) + "\n";
}

/** Reassembles newline-delimited records from arbitrary chunk boundaries. */
export class LineDecoder {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.trim().length > 0);
  }
}

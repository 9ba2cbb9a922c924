// Driving input: axis mapping, send-rate limiting and the offline buffer.
// Axis conventions: forward/back in [-1, +1] (+1 = full forward),
// left/right in [-1, +1] (+1 = full right).

export const THROTTLE_MAX = 2; // m/s² at full forward
export const BRAKE_MAX = 3; // m/s² at full back (encoded negative)
export const STEER_MAX = 10; // °/s at full deflection, mirrors a_max
export const SEND_RATE_HZ = 30;
export const OFFLINE_BUFFER_S = 1;

export type ControlValues = { throttle: number; steer: number };

const clampAxis = (v: number): number => Math.max(-1, Math.min(1, v));

/** Map gamepad/keyboard axes to the command ranges [-3, +2] m/s² and [-10, +10] °/s. */
export function encodeControl(forwardAxis: number, steerAxis: number): ControlValues {
  const f = clampAxis(forwardAxis);
  const s = clampAxis(steerAxis);
  return {
    throttle: f >= 0 ? f * THROTTLE_MAX : f * BRAKE_MAX,
    steer: s * STEER_MAX,
  };
}

/** Keyboard fallback: arrow keys act as full-deflection axes. */
export function axesFromKeys(pressed: ReadonlySet<string>): { forward: number; steer: number } {
  let forward = 0;
  let steer = 0;
  if (pressed.has("ArrowUp")) forward += 1;
  if (pressed.has("ArrowDown")) forward -= 1;
  if (pressed.has("ArrowRight")) steer += 1;
  if (pressed.has("ArrowLeft")) steer -= 1;
  return { forward, steer };
}

type Buffered = { at: number; control: ControlValues };

/**
 * Emits control values at most SEND_RATE_HZ; while disconnected, inputs
 * are buffered for up to one second and replayed on reconnect (older
 * entries are dropped).
 */
export class ControlEmitter {
  private lastSentAt = -Infinity;
  private buffer: Buffered[] = [];

  /** Returns the control to transmit now, or null when rate-limited. */
  sample(now: number, forwardAxis: number, steerAxis: number, connected: boolean): ControlValues | null {
    const control = encodeControl(forwardAxis, steerAxis);
    if (!connected) {
      this.buffer.push({ at: now, control });
      this.buffer = this.buffer.filter((b) => now - b.at <= OFFLINE_BUFFER_S);
      return null;
    }
    if (now - this.lastSentAt < 1 / SEND_RATE_HZ) return null;
    this.lastSentAt = now;
    return control;
  }

  /** Buffered inputs still younger than the window, oldest first; clears the buffer. */
  drainBuffer(now: number): ControlValues[] {
    const fresh = this.buffer.filter((b) => now - b.at <= OFFLINE_BUFFER_S);
    this.buffer = [];
    return fresh.map((b) => b.control);
  }

  get bufferedCount(): number {
    return this.buffer.length;
  }
}

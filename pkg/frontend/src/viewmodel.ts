// Cockpit view model: latest-frame tracking, connection status and the
// MS reporting state. No client-side physics: the vehicle lives on the
// server and the UI only ever shows the newest packet it received.

import type { FramePacket, ServerMessage } from "./protocol.js";

export const MS_REMINDER_S = 30;

export type SliderValues = { eye: number; head: number; stomach: number };
export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export class CockpitViewModel {
  latest: FramePacket | null = null;
  status: ConnectionStatus = "connecting";
  sliders: SliderValues = { eye: 0, head: 0, stomach: 0 };
  lastError: string | null = null;
  staleDropped = 0;

  private lastMsUpdateAt: number;

  constructor(now: number) {
    this.lastMsUpdateAt = now;
  }

  /** Ingest one server message; stale frames (seq <= newest seen) are discarded. */
  ingest(message: ServerMessage): void {
    if (message.kind === "error") {
      this.lastError = message.reason;
      return;
    }
    if (this.latest !== null && message.frame.seq <= this.latest.seq) {
      this.staleDropped += 1;
      return;
    }
    this.latest = message.frame;
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
  }

  setSliders(values: SliderValues): void {
    this.sliders = values;
  }

  /** Called when an MS report was actually sent; resets the reminder clock. */
  markMsSubmitted(now: number): void {
    this.lastMsUpdateAt = now;
  }

  /** Red-highlight rule: more than 30 s elapsed without an MS update. */
  msHighlight(now: number): boolean {
    return now - this.lastMsUpdateAt > MS_REMINDER_S;
  }
}

/**
 * Send an MS report through `transmit` (returns false on failure),
 * retrying once. Returns true when the report went out; a false return
 * is the caller's cue to surface a banner.
 */
export function submitMs(
  transmit: (line: string) => boolean,
  encoded: string,
): boolean {
  if (transmit(encoded)) return true;
  return transmit(encoded);
}

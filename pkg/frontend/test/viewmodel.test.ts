import { describe, expect, it } from "vitest";

import type { FramePacket } from "../src/protocol.js";
import { CockpitViewModel, submitMs } from "../src/viewmodel.js";

function frame(seq: number): FramePacket {
  return {
    seq,
    t: seq / 30,
    scene_speed: 0,
    scene_accel: 0,
    bend_g: 0,
    control_points: [{ y: 0, x: 0 }],
    prompt_on: false,
    brake_light: false,
    camera_mode: "third_person",
  };
}

describe("CockpitViewModel", () => {
  it("keeps only the highest-seq packet", () => {
    const vm = new CockpitViewModel(0);
    vm.ingest({ kind: "frame", frame: frame(5) });
    vm.ingest({ kind: "frame", frame: frame(7) });
    vm.ingest({ kind: "frame", frame: frame(6) }); // stale
    expect(vm.latest?.seq).toBe(7);
    expect(vm.staleDropped).toBe(1);
  });

  it("discards duplicate seq", () => {
    const vm = new CockpitViewModel(0);
    vm.ingest({ kind: "frame", frame: frame(3) });
    vm.ingest({ kind: "frame", frame: frame(3) });
    expect(vm.staleDropped).toBe(1);
  });

  it("records server errors without touching the frame", () => {
    const vm = new CockpitViewModel(0);
    vm.ingest({ kind: "frame", frame: frame(1) });
    vm.ingest({ kind: "error", reason: "invalid JSON" });
    expect(vm.latest?.seq).toBe(1);
    expect(vm.lastError).toBe("invalid JSON");
  });

  it("highlights the sliders after 30 s of silence", () => {
    const vm = new CockpitViewModel(0);
    expect(vm.msHighlight(29)).toBe(false);
    expect(vm.msHighlight(31)).toBe(true);
  });

  it("an update at 29 s prevents the highlight", () => {
    const vm = new CockpitViewModel(0);
    vm.markMsSubmitted(29);
    expect(vm.msHighlight(31)).toBe(false);
    expect(vm.msHighlight(59.5)).toBe(true);
  });
});

describe("submitMs", () => {
  it("retries once on failure", () => {
    let calls = 0;
    const flakyOnce = () => {
      calls += 1;
      return calls > 1;
    };
    expect(submitMs(flakyOnce, "x")).toBe(true);
    expect(calls).toBe(2);
  });

  it("reports failure after the retry for the caller to surface a banner", () => {
    let calls = 0;
    const dead = () => {
      calls += 1;
      return false;
    };
    expect(submitMs(dead, "x")).toBe(false);
    expect(calls).toBe(2);
  });

  it("sends once when the transport works", () => {
    let calls = 0;
    const ok = () => {
      calls += 1;
      return true;
    };
    expect(submitMs(ok, "x")).toBe(true);
    expect(calls).toBe(1);
  });
});

import { describe, expect, it } from "vitest";

import { axesFromKeys, ControlEmitter, encodeControl, SEND_RATE_HZ } from "../src/input.js";

describe("encodeControl", () => {
  it("neutral axes give zero command", () => {
    expect(encodeControl(0, 0)).toEqual({ throttle: 0, steer: 0 });
  });

  it("axis extremes map exactly to the command bounds", () => {
    expect(encodeControl(1, 0).throttle).toBe(2);
    expect(encodeControl(-1, 0).throttle).toBe(-3);
    expect(encodeControl(0, 1).steer).toBe(10);
    expect(encodeControl(0, -1).steer).toBe(-10);
  });

  it("scales linearly inside the range", () => {
    expect(encodeControl(0.5, 0).throttle).toBeCloseTo(1, 12);
    expect(encodeControl(-0.5, 0).throttle).toBeCloseTo(-1.5, 12);
    expect(encodeControl(0, 0.63).steer).toBeCloseTo(6.3, 12);
  });

  it("clamps out-of-range axes", () => {
    expect(encodeControl(5, -5)).toEqual({ throttle: 2, steer: -10 });
  });
});

describe("axesFromKeys", () => {
  it("arrow keys act as full-deflection axes", () => {
    expect(axesFromKeys(new Set(["ArrowUp"]))).toEqual({ forward: 1, steer: 0 });
    expect(axesFromKeys(new Set(["ArrowDown", "ArrowLeft"]))).toEqual({
      forward: -1,
      steer: -1,
    });
    expect(axesFromKeys(new Set(["ArrowUp", "ArrowDown"]))).toEqual({ forward: 0, steer: 0 });
  });
});

describe("ControlEmitter", () => {
  it("limits the send rate to 30 Hz", () => {
    const emitter = new ControlEmitter();
    let sent = 0;
    for (let i = 0; i < 1000; i++) {
      if (emitter.sample(i / 1000, 1, 0, true)) sent += 1;
    }
    expect(sent).toBeLessThanOrEqual(SEND_RATE_HZ + 1);
    expect(sent).toBeGreaterThanOrEqual(SEND_RATE_HZ - 2);
  });

  it("buffers while disconnected and drops entries older than one second", () => {
    const emitter = new ControlEmitter();
    expect(emitter.sample(0.0, 1, 0, false)).toBeNull();
    expect(emitter.sample(0.5, 0.5, 0, false)).toBeNull();
    expect(emitter.sample(1.8, 0, 1, false)).toBeNull();
    // entries at 0.0 and 0.5 are stale by now
    const drained = emitter.drainBuffer(1.8);
    expect(drained).toEqual([{ throttle: 0, steer: 10 }]);
    expect(emitter.bufferedCount).toBe(0);
  });

  it("sends immediately once reconnected", () => {
    const emitter = new ControlEmitter();
    emitter.sample(0.0, 1, 0, false);
    expect(emitter.sample(0.1, 1, 0, true)).toEqual({ throttle: 2, steer: 0 });
  });
});

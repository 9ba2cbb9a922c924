// Terminal demo: drive the live server with a scripted input pattern
// and print what the cockpit would render.
//
//   simpath serve --port 7677 &
//   npm run demo -- 7677

import { SessionClient } from "./client.js";
import { ControlEmitter } from "./input.js";
import { encodeControlMessage, encodeMsMessage } from "./protocol.js";
import { renderFrame } from "./render.js";
import { CockpitViewModel } from "./viewmodel.js";

const port = Number(process.argv[2] ?? 7677);
const viewport = { width: 1280, height: 720 };
const vm = new CockpitViewModel(performance.now() / 1000);
const emitter = new ControlEmitter();

const client = new SessionClient("127.0.0.1", port, {
  onConnect: () => {
    vm.setStatus("connected");
    console.log(`connected to 127.0.0.1:${port}`);
  },
  onClose: () => {
    vm.setStatus("disconnected");
    console.log("connection closed");
    process.exit(0);
  },
  onMessage: (message) => {
    vm.ingest(message);
    if (message.kind === "error") console.error(`server: ${message.reason}`);
    if (message.kind === "frame" && message.frame.seq % 30 === 0) {
      const scene = renderFrame(message.frame, viewport);
      const road = scene.road.map((p) => p.sx.toFixed(0)).join(",");
      console.log(
        `seq=${message.frame.seq} v=${scene.hud.speed.toFixed(1)} ` +
          `bend=${scene.hud.bend.toFixed(3)} symbol=${scene.symbol.visible} ` +
          `brake=${scene.car.brake} road_sx=[${road}]`,
      );
    }
  },
});

client.connect();

// scripted drive: accelerate, turn right, brake
let elapsed = 0;
const tick = setInterval(() => {
  elapsed += 0.05;
  const forward = elapsed < 6 ? 1 : elapsed < 12 ? 0 : -1;
  const steer = elapsed >= 6 && elapsed < 12 ? 0.63 : 0;
  const control = emitter.sample(elapsed, forward, steer, true);
  if (control) client.send(encodeControlMessage(control.throttle, control.steer));
  if (Math.abs(elapsed - 10) < 0.026) client.send(encodeMsMessage(1, 0, 1));
  if (elapsed >= 18) {
    clearInterval(tick);
    client.close();
  }
}, 50);

// Browser entry point. The server speaks NDJSON over TCP, which a page
// cannot open directly; point this app at a WebSocket bridge that pipes
// bytes through unchanged (e.g. `websocat -b ws-l:0.0.0.0:8080 tcp:127.0.0.1:7677`).

import { drawScene } from "./canvas.js";
import { axesFromKeys, ControlEmitter } from "./input.js";
import { encodeControlMessage, encodeMsMessage, LineDecoder, parseServerLine } from "./protocol.js";
import { renderFrame } from "./render.js";
import { CockpitViewModel, submitMs } from "./viewmodel.js";

const nowS = () => performance.now() / 1000;

function requireEl<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

export function startCockpit(wsUrl: string): void {
  const canvas = requireEl<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("no 2d context");
  const statusEl = requireEl<HTMLElement>("status");
  const bannerEl = requireEl<HTMLElement>("banner");
  const sliderBox = requireEl<HTMLElement>("ms-box");
  const sliders = {
    eye: requireEl<HTMLInputElement>("ms-eye"),
    head: requireEl<HTMLInputElement>("ms-head"),
    stomach: requireEl<HTMLInputElement>("ms-stomach"),
  };

  const vm = new CockpitViewModel(nowS());
  const emitter = new ControlEmitter();
  const decoder = new LineDecoder();
  const pressed = new Set<string>();

  const socket = new WebSocket(wsUrl);
  socket.onopen = () => vm.setStatus("connected");
  socket.onclose = () => vm.setStatus("disconnected");
  socket.onmessage = (event) => {
    for (const line of decoder.push(String(event.data))) {
      const message = parseServerLine(line);
      if (message) vm.ingest(message);
    }
  };

  const transmit = (line: string): boolean => {
    if (socket.readyState !== WebSocket.OPEN) return false;
    try {
      socket.send(line);
      return true;
    } catch {
      return false;
    }
  };

  window.addEventListener("keydown", (e) => pressed.add(e.key));
  window.addEventListener("keyup", (e) => pressed.delete(e.key));

  requireEl<HTMLButtonElement>("ms-send").addEventListener("click", () => {
    const line = encodeMsMessage(
      Number(sliders.eye.value),
      Number(sliders.head.value),
      Number(sliders.stomach.value),
    );
    if (submitMs(transmit, line)) {
      vm.markMsSubmitted(nowS());
      bannerEl.textContent = "";
    } else {
      bannerEl.textContent = "MS report failed to send";
    }
  });

  setInterval(() => {
    const pads = navigator.getGamepads?.() ?? [];
    const pad = pads[0];
    // gamepad axes when present, arrow keys otherwise
    const axes = pad
      ? { forward: -(pad.axes[1] ?? 0), steer: pad.axes[0] ?? 0 }
      : axesFromKeys(pressed);
    const control = emitter.sample(nowS(), axes.forward, axes.steer, vm.status === "connected");
    if (control) transmit(encodeControlMessage(control.throttle, control.steer));
  }, 1000 / 60);

  const paint = () => {
    if (vm.latest) {
      drawScene(ctx, renderFrame(vm.latest, { width: canvas.width, height: canvas.height }));
    }
    statusEl.textContent = vm.status;
    sliderBox.classList.toggle("overdue", vm.msHighlight(nowS()));
    requestAnimationFrame(paint);
  };
  requestAnimationFrame(paint);
}

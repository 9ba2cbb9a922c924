// Node TCP client for the live session protocol. Browsers cannot open
// raw TCP sockets; in a browser deployment pipe the same NDJSON stream
// through a WebSocket bridge and reuse LineDecoder/parseServerLine.

import * as net from "node:net";

import { LineDecoder, parseServerLine, type ServerMessage } from "./protocol.js";

export type ClientEvents = {
  onMessage: (message: ServerMessage) => void;
  onConnect?: () => void;
  onClose?: () => void;
};

export class SessionClient {
  private socket: net.Socket | null = null;
  private decoder = new LineDecoder();

  constructor(
    private host: string,
    private port: number,
    private events: ClientEvents,
  ) {}

  connect(): void {
    const socket = net.createConnection({ host: this.host, port: this.port });
    socket.setEncoding("utf-8");
    socket.on("connect", () => this.events.onConnect?.());
    socket.on("data", (chunk: string) => {
      for (const line of this.decoder.push(chunk)) {
        const message = parseServerLine(line);
        if (message) this.events.onMessage(message);
      }
    });
    socket.on("close", () => this.events.onClose?.());
    socket.on("error", () => socket.destroy());
    this.socket = socket;
  }

  /** Returns false when the line could not be handed to the socket. */
  send(line: string): boolean {
    if (!this.socket || this.socket.destroyed) return false;
    try {
      this.socket.write(line);
      return true;
    } catch {
      return false;
    }
  }

  close(): void {
    this.socket?.end();
    this.socket = null;
  }
}

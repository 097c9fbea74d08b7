// Session wiring: handshake, message dispatch, input sending.
//
// Kept free of DOM globals so it can be driven by a fake socket in tests;
// main.ts plugs in the real WebSocket, canvas and window events.

import { Hud } from "./hud.js";
import { InputMapper } from "./input.js";
import {
    ActionSpec, FrameMessage, InputPayload, inputMessage, parseServerMessage,
    validatePayload,
} from "./protocol.js";
import { LatestFrameSlot } from "./renderer.js";

export interface SocketLike {
    send(text: string): void;
    close(): void;
}

export interface SessionEvents {
    onReady?(session: Session): void;
    onError?(message: string): void;
    onClose?(): void;
}

export class Session {
    spec: ActionSpec | null = null;
    fps = 0;
    mapper: InputMapper | null = null;
    readonly hud = new Hud();
    readonly frames = new LatestFrameSlot();
    private readonly socket: SocketLike;
    private readonly events: SessionEvents;
    private readonly now: () => number;

    constructor(socket: SocketLike, events: SessionEvents = {},
                now: () => number = () => Date.now()) {
        this.socket = socket;
        this.events = events;
        this.now = now;
    }

    /** Feed raw text from the wire; returns the parsed message kind. */
    receive(text: string): string {
        let message;
        try {
            message = parseServerMessage(text);
        } catch (err) {
            this.events.onError?.(`bad server message: ${err}`);
            this.socket.close();
            return "invalid";
        }
        if (message.type === "hello") {
            this.spec = message.action_spec;
            this.fps = message.fps;
            this.mapper = new InputMapper(message.action_spec);
            this.events.onReady?.(this);
        } else if (message.type === "frame") {
            this.hud.onFrame(message, this.now());
            this.frames.put(message);
        } else {
            this.events.onError?.(message.message);
        }
        return message.type;
    }

    /** Validate against the handshake spec, then send. */
    send(payload: InputPayload | null): boolean {
        if (payload === null || this.spec === null) return false;
        if (!validatePayload(payload, this.spec)) return false;
        this.socket.send(inputMessage(payload));
        return true;
    }

    nextFrame(): FrameMessage | null {
        return this.frames.take();
    }
}

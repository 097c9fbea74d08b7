// Wire protocol types and input payload builders.
//
// Mirrors the play server's JSON contract exactly: hello / frame / error
// from the server, {"type": "input", "payload": ...} to it. Coordinates
// everywhere are arena units (the playfield is the unit square).

export interface ActionSpec {
    kind: "continuous-box" | "discrete" | "click" | "composite";
    name: string;
    lo?: number[];
    hi?: number[];
    tokens?: string[];
    parts?: Record<string, ActionSpec>;
}

export interface HelloMessage {
    type: "hello";
    action_spec: ActionSpec;
    arena: { w: number; h: number };
    fps: number;
}

export interface FramePolygon {
    pts: [number, number][];
    color: [number, number, number];
    opacity: number;
}

export interface FrameMessage {
    type: "frame";
    step: number;
    kind: "FIRST" | "MID" | "LAST";
    reward: number;
    polygons: FramePolygon[];
    phase?: string;
}

export interface ErrorMessage {
    type: "error";
    message: string;
}

export type ServerMessage = HelloMessage | FrameMessage | ErrorMessage;

export type InputPayload =
    | { dx: number; dy: number }
    | { token: string }
    | { x: number; y: number }
    | { x1: number; y1: number; x2: number; y2: number }
    | { parts: Record<string, InputPayload> };

export function parseServerMessage(text: string): ServerMessage {
    let raw: unknown;
    try {
        raw = JSON.parse(text);
    } catch {
        throw new Error("unparseable server message");
    }
    const msg = raw as { type?: string };
    if (msg === null || typeof msg !== "object") throw new Error("not an object");
    switch (msg.type) {
        case "hello": {
            const hello = msg as HelloMessage;
            if (typeof hello.fps !== "number" || !hello.action_spec?.kind) {
                throw new Error("malformed hello");
            }
            return hello;
        }
        case "frame": {
            const frame = msg as FrameMessage;
            if (!Array.isArray(frame.polygons) || typeof frame.reward !== "number") {
                throw new Error("malformed frame");
            }
            return frame;
        }
        case "error": {
            const err = msg as ErrorMessage;
            return { type: "error", message: String(err.message) };
        }
        default:
            throw new Error(`unknown message type ${msg.type}`);
    }
}

export function clamp(value: number, lo: number, hi: number): number {
    return Math.min(hi, Math.max(lo, value));
}

export function joystickPayload(dx: number, dy: number): InputPayload {
    return { dx: clamp(dx, -1, 1), dy: clamp(dy, -1, 1) };
}

export function gridPayload(token: string): InputPayload {
    return { token };
}

export function positionPayload(x: number, y: number): InputPayload {
    return { x: clamp(x, 0, 1), y: clamp(y, 0, 1) };
}

export function clickPayload(first: [number, number], second: [number, number]): InputPayload {
    return {
        x1: clamp(first[0], 0, 1), y1: clamp(first[1], 0, 1),
        x2: clamp(second[0], 0, 1), y2: clamp(second[1], 0, 1),
    };
}

export function compositePayload(parts: Record<string, InputPayload>): InputPayload {
    return { parts };
}

export function inputMessage(payload: InputPayload): string {
    return JSON.stringify({ type: "input", payload });
}

// Client-side guarantee: everything we send validates against the
// handshake spec, so the server never has a reason to drop the session.
export function validatePayload(payload: InputPayload, spec: ActionSpec): boolean {
    const p = payload as Record<string, unknown>;
    const finite = (v: unknown) => typeof v === "number" && Number.isFinite(v);
    switch (spec.name) {
        case "joystick":
            return finite(p.dx) && finite(p.dy)
                && Math.abs(p.dx as number) <= 1 && Math.abs(p.dy as number) <= 1;
        case "grid":
            return typeof p.token === "string" && (spec.tokens ?? []).includes(p.token);
        case "set_position":
            return finite(p.x) && finite(p.y)
                && (p.x as number) >= 0 && (p.x as number) <= 1
                && (p.y as number) >= 0 && (p.y as number) <= 1;
        case "click":
            return ["x1", "y1", "x2", "y2"].every(
                (k) => finite(p[k]) && (p[k] as number) >= 0 && (p[k] as number) <= 1);
        case "composite": {
            const parts = p.parts as Record<string, InputPayload> | undefined;
            if (!parts || !spec.parts) return false;
            return Object.entries(parts).every(
                ([name, sub]) => name in spec.parts! && validatePayload(sub, spec.parts![name]));
        }
        default:
            return false;
    }
}

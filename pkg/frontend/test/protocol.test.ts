import { describe, expect, it } from "vitest";

import {
    ActionSpec, clickPayload, compositePayload, gridPayload, inputMessage,
    joystickPayload, parseServerMessage, positionPayload, validatePayload,
} from "../src/protocol.js";

const JOYSTICK: ActionSpec = {
    kind: "continuous-box", name: "joystick", lo: [-1, -1], hi: [1, 1],
};
const GRID: ActionSpec = {
    kind: "discrete", name: "grid", tokens: ["none", "left", "right", "up", "down"],
};

describe("parseServerMessage", () => {
    it("accepts the three server message types", () => {
        const hello = parseServerMessage(JSON.stringify({
            type: "hello", action_spec: JOYSTICK, arena: { w: 1, h: 1 }, fps: 60,
        }));
        expect(hello.type).toBe("hello");

        const frame = parseServerMessage(JSON.stringify({
            type: "frame", step: 3, kind: "MID", reward: 0.5,
            polygons: [{ pts: [[0, 0], [1, 0], [1, 1]], color: [255, 0, 0], opacity: 255 }],
        }));
        expect(frame.type).toBe("frame");
        if (frame.type === "frame") expect(frame.polygons).toHaveLength(1);

        const error = parseServerMessage(JSON.stringify({ type: "error", message: "x" }));
        expect(error).toEqual({ type: "error", message: "x" });
    });

    it("rejects malformed messages", () => {
        expect(() => parseServerMessage("not json")).toThrow();
        expect(() => parseServerMessage("{\"type\":\"warp\"}")).toThrow();
        expect(() => parseServerMessage("{\"type\":\"hello\"}")).toThrow();
        expect(() => parseServerMessage("{\"type\":\"frame\"}")).toThrow();
    });
});

describe("payload builders", () => {
    it("clamps joystick values into the box", () => {
        expect(joystickPayload(2, -9)).toEqual({ dx: 1, dy: -1 });
        expect(joystickPayload(0.25, 0.5)).toEqual({ dx: 0.25, dy: 0.5 });
    });

    it("clamps positions and clicks into the arena", () => {
        expect(positionPayload(-0.5, 1.5)).toEqual({ x: 0, y: 1 });
        expect(clickPayload([0.2, 0.3], [1.4, 0.5]))
            .toEqual({ x1: 0.2, y1: 0.3, x2: 1, y2: 0.5 });
    });

    it("wraps payloads in input messages", () => {
        expect(JSON.parse(inputMessage(gridPayload("left"))))
            .toEqual({ type: "input", payload: { token: "left" } });
    });
});

describe("validatePayload", () => {
    it("accepts in-spec payloads", () => {
        expect(validatePayload(joystickPayload(0.5, -0.5), JOYSTICK)).toBe(true);
        expect(validatePayload(gridPayload("left"), GRID)).toBe(true);
        expect(validatePayload(positionPayload(0.5, 0.5),
            { kind: "continuous-box", name: "set_position" })).toBe(true);
        expect(validatePayload(clickPayload([0, 0], [1, 1]),
            { kind: "click", name: "click" })).toBe(true);
    });

    it("rejects out-of-spec payloads", () => {
        expect(validatePayload({ token: "sideways" }, GRID)).toBe(false);
        expect(validatePayload({ dx: Number.NaN, dy: 0 }, JOYSTICK)).toBe(false);
        expect(validatePayload({ dx: 2, dy: 0 }, JOYSTICK)).toBe(false);
    });

    it("validates composite parts recursively and allows omissions", () => {
        const spec: ActionSpec = {
            kind: "composite", name: "composite",
            parts: { stick: JOYSTICK, pad: GRID },
        };
        expect(validatePayload(
            compositePayload({ stick: joystickPayload(1, 0) }), spec)).toBe(true);
        expect(validatePayload(
            compositePayload({ stick: gridPayload("left") }), spec)).toBe(false);
        expect(validatePayload(
            compositePayload({ rogue: gridPayload("left") }), spec)).toBe(false);
    });
});

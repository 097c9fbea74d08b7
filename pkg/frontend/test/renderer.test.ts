import { describe, expect, it } from "vitest";

import { FrameMessage } from "../src/protocol.js";
import { Canvas2D, LatestFrameSlot, drawFrame } from "../src/renderer.js";

class RecordingCtx implements Canvas2D {
    fillStyle = "";
    globalAlpha = 1;
    log: string[] = [];

    fillRect(x: number, y: number, w: number, h: number): void {
        this.log.push(`rect ${this.fillStyle} ${x},${y},${w},${h}`);
    }
    beginPath(): void { this.log.push("begin"); }
    moveTo(x: number, y: number): void { this.log.push(`move ${x},${y}`); }
    lineTo(x: number, y: number): void { this.log.push(`line ${x},${y}`); }
    closePath(): void { this.log.push("close"); }
    fill(): void { this.log.push(`fill ${this.fillStyle} a=${this.globalAlpha}`); }
}

function navFrame(): FrameMessage {
    return {
        type: "frame", step: 0, kind: "FIRST", reward: 0,
        polygons: [
            { pts: [[0.05, 0.05], [0.15, 0.05], [0.15, 0.15], [0.05, 0.15]],
              color: [255, 0, 0], opacity: 255 },
            { pts: [[0.45, 0.45], [0.55, 0.45], [0.55, 0.55], [0.45, 0.55]],
              color: [0, 255, 0], opacity: 255 },
        ],
    };
}

describe("drawFrame", () => {
    it("draws polygons back-to-front in pixel coordinates with y flipped", () => {
        const ctx = new RecordingCtx();
        const drawn = drawFrame(ctx, navFrame(), 100);
        expect(drawn).toBe(2);
        expect(ctx.log[0]).toBe("rect #000000 0,0,100,100");
        const fills = ctx.log.filter((l) => l.startsWith("fill"));
        expect(fills).toEqual(["fill rgb(255,0,0) a=1", "fill rgb(0,255,0) a=1"]);
        // First vertex of the red square: arena (0.05, 0.05) -> pixel (5, 95).
        expect(ctx.log[ctx.log.indexOf("begin") + 1]).toBe("move 5,95");
    });

    it("is a pure function of the frame", () => {
        const a = new RecordingCtx();
        const b = new RecordingCtx();
        drawFrame(a, navFrame(), 64);
        drawFrame(b, navFrame(), 64);
        expect(a.log).toEqual(b.log);
    });

    it("skips malformed polygons and keeps drawing", () => {
        const frame = navFrame();
        frame.polygons.splice(1, 0, { pts: [[0, 0]], color: [0, 0, 255], opacity: 255 });
        const ctx = new RecordingCtx();
        expect(drawFrame(ctx, frame, 64)).toBe(2);
    });

    it("applies opacity as canvas alpha", () => {
        const frame = navFrame();
        frame.polygons[0].opacity = 128;
        const ctx = new RecordingCtx();
        drawFrame(ctx, frame, 64);
        expect(ctx.log.some((l) => l.includes(`a=${128 / 255}`))).toBe(true);
        expect(ctx.globalAlpha).toBe(1);  // reset afterwards
    });
});

describe("LatestFrameSlot", () => {
    it("keeps only the newest frame", () => {
        const slot = new LatestFrameSlot();
        const first = navFrame();
        const second = { ...navFrame(), step: 1 };
        slot.put(first);
        slot.put(second);
        expect(slot.take()?.step).toBe(1);
        expect(slot.take()).toBeNull();
        expect(slot.dropped).toBe(1);
    });
});

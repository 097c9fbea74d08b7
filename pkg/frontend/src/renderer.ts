// Canvas renderer: a pure function of the latest frame message.
//
// Polygons arrive back-to-front in arena units; the canvas is a square,
// so mapping is px = x * size, py = (1 - y) * size (screen y grows down).
// No client-side simulation or interpolation happens here.

import { FrameMessage, FramePolygon } from "./protocol.js";

// Structural subset of CanvasRenderingContext2D, so tests can record calls.
export interface Canvas2D {
    fillStyle: string | CanvasGradient | CanvasPattern;
    globalAlpha: number;
    fillRect(x: number, y: number, w: number, h: number): void;
    beginPath(): void;
    moveTo(x: number, y: number): void;
    lineTo(x: number, y: number): void;
    closePath(): void;
    fill(): void;
}

let warnedMalformed = false;

function polygonOk(poly: FramePolygon): boolean {
    return Array.isArray(poly?.pts) && poly.pts.length >= 3
        && Array.isArray(poly?.color) && poly.color.length === 3
        && poly.pts.every((p) => Array.isArray(p) && p.length === 2
            && Number.isFinite(p[0]) && Number.isFinite(p[1]));
}

/** Draw one frame; returns the number of polygons drawn (malformed ones
 * are skipped, logged once per session). */
export function drawFrame(ctx: Canvas2D, frame: FrameMessage, size: number): number {
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#000000";
    ctx.fillRect(0, 0, size, size);
    let drawn = 0;
    for (const poly of frame.polygons) {
        if (!polygonOk(poly)) {
            if (!warnedMalformed) {
                console.warn("skipping malformed polygon", poly);
                warnedMalformed = true;
            }
            continue;
        }
        const [r, g, b] = poly.color;
        ctx.fillStyle = `rgb(${r},${g},${b})`;
        ctx.globalAlpha = (poly.opacity ?? 255) / 255;
        ctx.beginPath();
        poly.pts.forEach(([x, y], i) => {
            const px = x * size;
            const py = (1 - y) * size;
            if (i === 0) ctx.moveTo(px, py);
            else ctx.lineTo(px, py);
        });
        ctx.closePath();
        ctx.fill();
        drawn += 1;
    }
    ctx.globalAlpha = 1;
    return drawn;
}

/** Latest-frame slot: the render loop always draws the newest frame and
 * silently drops anything older (no queue builds up behind a slow tab). */
export class LatestFrameSlot {
    private frame: FrameMessage | null = null;
    dropped = 0;

    put(frame: FrameMessage): void {
        if (this.frame !== null) this.dropped += 1;
        this.frame = frame;
    }

    take(): FrameMessage | null {
        const frame = this.frame;
        this.frame = null;
        return frame;
    }
}

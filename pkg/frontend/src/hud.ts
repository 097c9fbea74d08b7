// HUD state: per-trial cumulative reward and measured frames per second.

import { FrameMessage } from "./protocol.js";

const FPS_WINDOW = 90;

export class Hud {
    private rewardTotal = 0;
    private stamps: number[] = [];
    private lastKind = "";
    phase: string | undefined;

    /** Feed every received frame; `now` is a millisecond timestamp. */
    onFrame(frame: FrameMessage, now: number): void {
        if (frame.kind === "FIRST") this.rewardTotal = 0;
        this.rewardTotal += frame.reward;
        this.phase = frame.phase;
        this.lastKind = frame.kind;
        this.stamps.push(now);
        if (this.stamps.length > FPS_WINDOW) this.stamps.shift();
    }

    reward(): number {
        return this.rewardTotal;
    }

    /** Mean rate over the sliding window, frames per second. */
    fps(): number {
        if (this.stamps.length < 2) return 0;
        const span = this.stamps[this.stamps.length - 1] - this.stamps[0];
        if (span <= 0) return 0;
        return (this.stamps.length - 1) * 1000 / span;
    }

    text(): string {
        const bits = [`reward ${this.rewardTotal.toFixed(2)}`, `${this.fps().toFixed(1)} fps`];
        if (this.phase) bits.push(`phase ${this.phase}`);
        if (this.lastKind === "LAST") bits.push("trial over");
        return bits.join("  ·  ");
    }
}

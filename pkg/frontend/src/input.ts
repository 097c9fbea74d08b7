// Keyboard/mouse to input payloads, driven by the handshake ActionSpec.
//
// Joystick: held arrows or WASD form a vector in [-1, 1]^2 (holding right
// and up gives (1, 1)). Grid: keydown emits a token. Set-position: a
// click places the sprite. Click space: the first click selects, the
// second completes the 4-vector. Composite specs get one key group per
// part (WASD for the first joystick, arrows for the second).

import {
    ActionSpec, InputPayload, clickPayload, compositePayload, gridPayload,
    joystickPayload, positionPayload,
} from "./protocol.js";

export type KeyGroup = "arrows" | "wasd" | "both";

const AXES: Record<string, Record<string, [number, number]>> = {
    arrows: {
        ArrowLeft: [-1, 0], ArrowRight: [1, 0], ArrowUp: [0, 1], ArrowDown: [0, -1],
    },
    wasd: {
        KeyA: [-1, 0], KeyD: [1, 0], KeyW: [0, 1], KeyS: [0, -1],
    },
};
AXES.both = { ...AXES.arrows, ...AXES.wasd };

const GRID_TOKENS: Record<string, Record<string, string>> = {
    arrows: { ArrowLeft: "left", ArrowRight: "right", ArrowUp: "up", ArrowDown: "down" },
    wasd: { KeyA: "left", KeyD: "right", KeyW: "up", KeyS: "down" },
};
GRID_TOKENS.both = { ...GRID_TOKENS.arrows, ...GRID_TOKENS.wasd };

export function joystickVector(held: Set<string>, group: KeyGroup): [number, number] {
    let dx = 0;
    let dy = 0;
    for (const code of held) {
        const axis = AXES[group][code];
        if (axis) {
            dx += axis[0];
            dy += axis[1];
        }
    }
    return [Math.max(-1, Math.min(1, dx)), Math.max(-1, Math.min(1, dy))];
}

export function gridTokenForKey(code: string, group: KeyGroup): string | null {
    return GRID_TOKENS[group][code] ?? null;
}

// Canvas pixel -> arena coordinates (y flipped); null outside the canvas.
export function canvasToArena(px: number, py: number, size: number): [number, number] | null {
    if (px < 0 || py < 0 || px > size || py > size) return null;
    return [px / size, 1 - py / size];
}

export class ClickAssembler {
    private first: [number, number] | null = null;

    add(point: [number, number]): InputPayload | null {
        if (this.first === null) {
            this.first = point;
            return null;
        }
        const payload = clickPayload(this.first, point);
        this.first = null;
        return payload;
    }

    pending(): boolean {
        return this.first !== null;
    }
}

interface PartMapper {
    name: string;
    spec: ActionSpec;
    group: KeyGroup;
    clicks: ClickAssembler;
}

/**
 * Builds input payloads from device events for any handshake spec.
 * Returns a payload when the event produced new input, else null;
 * key state is shared so held joysticks re-emit on every change.
 */
export class InputMapper {
    readonly spec: ActionSpec;
    private readonly held = new Set<string>();
    private readonly parts: PartMapper[];

    constructor(spec: ActionSpec) {
        this.spec = spec;
        const leaves = spec.name === "composite"
            ? Object.entries(spec.parts ?? {}).map(([name, sub]) => ({ name, sub }))
            : [{ name: "", sub: spec }];
        const groups: KeyGroup[] = leaves.length > 1 ? ["wasd", "arrows"] : ["both"];
        this.parts = leaves.map(({ name, sub }, i) => ({
            name,
            spec: sub,
            group: groups[Math.min(i, groups.length - 1)],
            clicks: new ClickAssembler(),
        }));
    }

    keyDown(code: string): InputPayload | null {
        const fresh = !this.held.has(code);
        this.held.add(code);
        return fresh ? this.fromKeys(code) : null;
    }

    keyUp(code: string): InputPayload | null {
        if (!this.held.delete(code)) return null;
        return this.fromKeys(code, true);
    }

    /** Mouse click already translated to arena coordinates. */
    pointer(point: [number, number] | null): InputPayload | null {
        if (point === null) return null;  // outside the canvas: ignored
        const updates: Record<string, InputPayload> = {};
        for (const part of this.parts) {
            if (part.spec.name === "set_position") {
                updates[part.name] = positionPayload(point[0], point[1]);
            } else if (part.spec.name === "click") {
                const payload = part.clicks.add(point);
                if (payload) updates[part.name] = payload;
            }
        }
        return this.wrap(updates);
    }

    private fromKeys(code: string, released = false): InputPayload | null {
        const updates: Record<string, InputPayload> = {};
        for (const part of this.parts) {
            if (part.spec.name === "joystick") {
                if (AXES[part.group][code]) {
                    const [dx, dy] = joystickVector(this.held, part.group);
                    updates[part.name] = joystickPayload(dx, dy);
                }
            } else if (part.spec.name === "grid" && !released) {
                const token = gridTokenForKey(code, part.group);
                if (token && (part.spec.tokens ?? []).includes(token)) {
                    updates[part.name] = gridPayload(token);
                }
            }
        }
        return this.wrap(updates);
    }

    private wrap(updates: Record<string, InputPayload>): InputPayload | null {
        if (Object.keys(updates).length === 0) return null;
        if (this.spec.name !== "composite") {
            return updates[""] ?? null;
        }
        return compositePayload(updates);
    }
}

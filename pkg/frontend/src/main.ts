// Browser bootstrap: canvas sizing, WebSocket lifecycle, device events.

import { Session } from "./client.js";
import { canvasToArena } from "./input.js";
import { drawFrame } from "./renderer.js";

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const hudEl = document.getElementById("hud") as HTMLDivElement;
const bannerEl = document.getElementById("banner") as HTMLDivElement;
const retryEl = document.getElementById("retry") as HTMLButtonElement;
const taskEl = document.getElementById("task") as HTMLSelectElement;

let session: Session | null = null;
let socket: WebSocket | null = null;

function fitCanvas(): void {
    // Largest square that fits the viewport; arena coordinates stay
    // resolution-independent.
    const size = Math.floor(Math.min(window.innerWidth, window.innerHeight - 60));
    canvas.width = size;
    canvas.height = size;
}

function banner(text: string | null): void {
    bannerEl.textContent = text ?? "";
    bannerEl.style.display = text ? "block" : "none";
    retryEl.style.display = text ? "inline-block" : "none";
}

function wsUrl(): string {
    const proto = location.protocol === "https:" ? "wss" : "ws";
    const recipe = taskEl.value ? `?recipe=${encodeURIComponent(taskEl.value)}` : "";
    return `${proto}://${location.host}/ws${recipe}`;
}

function connect(): void {
    banner(null);
    socket?.close();
    socket = new WebSocket(wsUrl());
    const live = new Session(
        { send: (t) => socket?.send(t), close: () => socket?.close() },
        {
            onReady: () => { session = live; },
            onError: (msg) => banner(msg),
            onClose: () => banner("connection closed"),
        });
    socket.onmessage = (event) => live.receive(String(event.data));
    socket.onerror = () => banner("connection failed");
    socket.onclose = () => banner("connection closed — pick a task and retry");
}

async function loadTasks(): Promise<void> {
    try {
        const body = await (await fetch("/healthz")).json();
        for (const name of body.builtins ?? []) {
            const option = document.createElement("option");
            option.value = name;
            option.textContent = name;
            if (name === body.recipe) option.selected = true;
            taskEl.appendChild(option);
        }
    } catch {
        banner("server unreachable");
    }
}

function renderLoop(): void {
    const ctx = canvas.getContext("2d");
    if (ctx && session) {
        const frame = session.nextFrame();
        if (frame) {
            drawFrame(ctx, frame, canvas.width);
            hudEl.textContent = session.hud.text();
        }
    }
    requestAnimationFrame(renderLoop);
}

window.addEventListener("keydown", (event) => {
    if (event.repeat || !session?.mapper) return;
    if (session.send(session.mapper.keyDown(event.code))) event.preventDefault();
});
window.addEventListener("keyup", (event) => {
    if (!session?.mapper) return;
    session.send(session.mapper.keyUp(event.code));
});
canvas.addEventListener("mousedown", (event) => {
    if (!session?.mapper) return;
    const rect = canvas.getBoundingClientRect();
    const point = canvasToArena(event.clientX - rect.left, event.clientY - rect.top,
                                canvas.width);
    session.send(session.mapper.pointer(point));
});
window.addEventListener("resize", fitCanvas);
retryEl.addEventListener("click", connect);
taskEl.addEventListener("change", connect);

fitCanvas();
loadTasks().then(connect);
renderLoop();

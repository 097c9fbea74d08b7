"""Real-time WebSocket play service and its wire protocol.

Protocol (JSON text frames, coordinates in arena units):

    server -> client  {"type": "hello", "action_spec": ..., "arena": {"w": 1, "h": 1}, "fps": n}
    client -> server  {"type": "input", "payload": per action-spec kind}
    server -> client  {"type": "frame", "step": n, "kind": "FIRST|MID|LAST",
                       "reward": r, "polygons": [{"pts": [[x, y], ...],
                       "color": [r, g, b], "opacity": a}], "phase"?: name}
    server -> client  {"type": "error", "message": text}

Frames are vector display lists, not pixels: the client rasterizes, which
costs roughly a hundredth of the bandwidth of images.

Input payloads by action-space name: joystick {"dx", "dy"}, grid
{"token"}, set_position {"x", "y"}, click {"x1", "y1", "x2", "y2"},
composite {"parts": {name: payload}}.

One session owns one environment; the session loop steps it on a
monotonic clock at the handshake fps, consuming the most recent input
message each tick (absent input means the neutral action). Frame sending
never blocks the clock: a bounded outbox drops the oldest frame under
backpressure.
"""

import asyncio
import itertools
import time

import numpy as np

from . import recipes
from .errors import ProtocolError
from .observers import display_list

OUTBOX_LIMIT = 8


# --- wire protocol -------------------------------------------------------------

def encode_hello(action_spec, fps):
    return {"type": "hello", "action_spec": action_spec.to_json(),
            "arena": {"w": 1, "h": 1}, "fps": fps}


def encode_frame(timestep, drawables):
    frame = {
        "type": "frame",
        "step": timestep.meta["step_index"],
        "kind": timestep.kind.value,
        "reward": timestep.reward,
        "polygons": [{
            "pts": [[round(float(x), 6), round(float(y), 6)] for x, y in d.vertices],
            "color": list(d.color),
            "opacity": d.opacity,
        } for d in drawables],
    }
    if "phase" in timestep.meta:
        frame["phase"] = timestep.meta["phase"]
    return frame


def encode_error(message):
    return {"type": "error", "message": str(message)}


def _number(payload, key):
    value = payload.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ProtocolError(f"input field {key!r} must be a number, got {value!r}")
    return float(value)


def decode_action(message, spec):
    """Engine action from an input message; continuous values are clamped."""
    if not isinstance(message, dict) or message.get("type") != "input":
        raise ProtocolError(f"expected an input message, got {message!r}")
    return _decode_payload(message.get("payload"), spec)


def _decode_payload(payload, spec):
    if not isinstance(payload, dict):
        raise ProtocolError(f"input payload must be an object, got {payload!r}")
    name = spec.name
    if name == "joystick":
        vec = np.array([_number(payload, "dx"), _number(payload, "dy")])
        return np.clip(vec, -1.0, 1.0)
    if name == "grid":
        token = payload.get("token")
        if token not in spec.tokens:
            raise ProtocolError(f"unknown grid token {token!r}")
        return token
    if name == "set_position":
        vec = np.array([_number(payload, "x"), _number(payload, "y")])
        return np.clip(vec, 0.0, 1.0)
    if name == "click":
        vec = np.array([_number(payload, k) for k in ("x1", "y1", "x2", "y2")])
        return np.clip(vec, 0.0, 1.0)
    if name == "composite":
        parts = payload.get("parts")
        if not isinstance(parts, dict) or not set(parts) <= set(spec.parts):
            raise ProtocolError(f"composite parts must be a subset of {sorted(spec.parts)}")
        # Omitted parts mean "no input for that controller this tick".
        return {part: (_decode_payload(parts[part], sub) if part in parts else None)
                for part, sub in spec.parts.items()}
    raise ProtocolError(f"unknown action space {name!r}")


def encode_action(action, spec):
    """Inverse of decode: engine action -> input payload (round-trips)."""
    name = spec.name
    if name == "joystick":
        return {"dx": float(action[0]), "dy": float(action[1])}
    if name == "grid":
        return {"token": action}
    if name == "set_position":
        return {"x": float(action[0]), "y": float(action[1])}
    if name == "click":
        return {"x1": float(action[0]), "y1": float(action[1]),
                "x2": float(action[2]), "y2": float(action[3])}
    if name == "composite":
        return {"parts": {part: encode_action(action[part], sub)
                          for part, sub in spec.parts.items()
                          if action.get(part) is not None}}
    raise ProtocolError(f"unknown action space {name!r}")


# --- session loop -----------------------------------------------------------------

class SessionStats:
    def __init__(self):
        self.frames_sent = 0
        self.overruns = 0
        self.dropped_frames = 0


class Session:
    """One connected player: env, latest-input slot, bounded outbox."""

    _ids = itertools.count(1)

    def __init__(self, recipe, fps, seed):
        self.id = next(self._ids)
        self.env = recipes.build(recipe, seed=seed)
        self.fps = fps
        self.spec = self.env.action_spec()
        self.latest_action = None
        self.stats = SessionStats()
        self.outbox = asyncio.Queue(maxsize=OUTBOX_LIMIT)

    def push_frame(self, frame):
        while True:
            try:
                self.outbox.put_nowait(frame)
                return
            except asyncio.QueueFull:
                self.outbox.get_nowait()
                self.stats.dropped_frames += 1


async def session_loop(socket, session, clock=time.monotonic, sleep=asyncio.sleep):
    """Fixed-fps tick loop: consume latest input, step, push a frame.

    Runs until the connection drops. A tick that misses its deadline by
    more than a period skips its frame and resynchronizes.
    """
    period = 1.0 / session.fps
    sender = asyncio.ensure_future(_send_frames(socket, session))
    receiver = asyncio.ensure_future(_receive_inputs(socket, session))
    try:
        await socket.send_json(encode_hello(session.spec, session.fps))
        timestep = session.env.reset()
        session.push_frame(encode_frame(timestep, display_list(session.env.state)))
        next_tick = clock() + period
        while not receiver.done() and not sender.done():
            await sleep(max(0.0, next_tick - clock()))
            # Sample (not consume) the latest input state: a held joystick
            # keeps applying until the client reports a change.
            action = session.latest_action
            if action is None:
                action = session.env.action_space.neutral()
            timestep = session.env.step(action)
            now = clock()
            if now - next_tick > period:
                session.stats.overruns += 1
            else:
                session.push_frame(encode_frame(timestep, display_list(session.env.state)))
                session.stats.frames_sent += 1
            next_tick = max(next_tick + period, now)
    finally:
        sender.cancel()
        receiver.cancel()


async def _send_frames(socket, session):
    while True:
        frame = await session.outbox.get()
        await socket.send_json(frame)


async def _receive_inputs(socket, session):
    """Store the most recent decodable action; last writer wins.

    A malformed message sends an error frame and ends the session.
    """
    while True:
        message = await socket.receive_json()
        try:
            session.latest_action = decode_action(message, session.spec)
        except ProtocolError as err:
            await socket.send_json(encode_error(err))
            return


# --- application ------------------------------------------------------------------

def create_app(recipe, fps=60, seed=None, static_dir=None):
    """FastAPI app exposing /ws for play and optional static client files.

    Each connection gets its own environment and its own seed (base seed
    plus a per-session counter), so concurrent sessions are independent.
    """
    from fastapi import FastAPI, WebSocket, WebSocketDisconnect

    recipe = recipes.load(recipe)
    base_seed = recipe.seed if seed is None else seed
    session_counter = itertools.count()
    app = FastAPI(title="polyarena play server")
    app.state.sessions = []

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "recipe": recipe.name,
                "builtins": list(recipes.BUILTIN_NAMES)}

    @app.websocket("/ws")
    async def play(socket: WebSocket):
        await socket.accept()
        # A client may pick any builtin task per session (?recipe=name);
        # arbitrary paths are not accepted over the wire.
        requested = socket.query_params.get("recipe")
        chosen = recipes.builtin(requested) if requested in recipes.BUILTIN_NAMES \
            else recipe
        session = Session(chosen, fps, seed=base_seed + next(session_counter))
        app.state.sessions.append(session.stats)
        try:
            await session_loop(socket, session)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            try:
                await socket.close()
            except RuntimeError:
                pass

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="client")
    return app


def serve(recipe, port=8765, fps=60, seed=None, static_dir=None, host="127.0.0.1"):
    """Blocking entry point used by the CLI."""
    import uvicorn

    app = create_app(recipe, fps=fps, seed=seed, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")

"""Trajectory logging and procedural video-dataset generation.

Episode logs are newline-delimited JSON, one record per timestep, with
every sprite field (ids and world vertices included) so a log alone can
be re-rendered, and (seed, logged actions) regenerate every state field
exactly through re-simulation. Floats are written with 9 significant
digits, which keeps logs greppable while replay equality comes from
re-simulating rather than comparing stored floats.
"""

import json
import math
from pathlib import Path

import numpy as np

from . import recipes
from .errors import SinkWriteError
from .observers import encode_png

MANIFEST_NAME = "manifest.json"
LOG_NAME = "episode.log"

SPRITE_RECORD_FIELDS = ("id", "layer", "x", "y", "angle", "scale", "x_vel",
                        "y_vel", "angular_vel", "mass", "c0", "c1", "c2",
                        "opacity", "vertices")


def _round9(value):
    if not math.isfinite(value):
        return value
    return float(f"{value:.9g}")


def sprite_record(sprite, layer):
    """Flat serialized form of one sprite; field names are the wire contract."""
    return {
        "id": sprite.id,
        "layer": layer,
        "x": _round9(sprite.position[0]),
        "y": _round9(sprite.position[1]),
        "angle": _round9(sprite.angle),
        "scale": _round9(sprite.scale),
        "x_vel": _round9(sprite.velocity[0]),
        "y_vel": _round9(sprite.velocity[1]),
        "angular_vel": _round9(sprite.angular_velocity),
        "mass": sprite.mass if math.isinf(sprite.mass) else _round9(sprite.mass),
        "c0": sprite.color[0],
        "c1": sprite.color[1],
        "c2": sprite.color[2],
        "opacity": sprite.opacity,
        "vertices": [[_round9(x), _round9(y)] for x, y in sprite.world_vertices()],
    }


def state_records(state):
    return [sprite_record(s, layer) for layer, members in state.layers()
            for s in members]


def _action_record(action):
    if action is None:
        return None
    if isinstance(action, str):
        return action
    if isinstance(action, dict):
        return {k: _action_record(v) for k, v in action.items()}
    return [_round9(float(v)) for v in np.asarray(action).reshape(-1)]


def step_record(timestep, state, action):
    return {
        "step_index": timestep.meta["step_index"],
        "kind": timestep.kind.value,
        "reward": _round9(timestep.reward),
        "action": _action_record(action),
        "state": state_records(state),
    }


def record_episode(env, policy, sink=None, max_steps=None):
    """Run one trial and log every timestep.

    policy: callable(timestep) -> action. sink: writable text stream; when
    given, each record is written as one JSON line. Returns the list of
    step records (FIRST through LAST inclusive). max_steps guards against
    tasks that cannot terminate under the given policy; when it trips, the
    episode is truncated without a LAST record.
    """
    def emit(record):
        records.append(record)
        if sink is not None:
            try:
                sink.write(json.dumps(record) + "\n")
            except OSError as err:
                raise SinkWriteError(f"log write failed: {err}") from err

    records = []
    timestep = env.reset()
    emit(step_record(timestep, env.state, None))
    while not timestep.last():
        if max_steps is not None and len(records) > max_steps:
            break
        action = policy(timestep)
        timestep = env.step(action)
        emit(step_record(timestep, env.state, action))
    return records


def random_policy(env, seed=0):
    """Uniform draws from the environment's action spec."""
    spec = env.action_spec()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(7,))))
    return lambda timestep: spec.sample(rng)


def generate_dataset(recipe, out_dir, episodes, policy="random", image_size=None,
                     seed=None, supersample=1, frame_format="png", max_steps=None):
    """Render N episodes of a recipe to disk and return the manifest.

    Layout: out_dir/manifest.json, out_dir/episode_{i}/frame_{t}.png (or
    .rgb raw blobs), out_dir/episode_{i}/episode.log. Each episode runs in
    a fresh environment seeded with seed + i, so the dataset is a pure
    function of (recipe, seed, episodes).
    """
    if episodes < 1:
        raise ValueError(f"episodes must be >= 1, got {episodes}")
    if frame_format not in ("png", "raw"):
        raise ValueError(f"frame_format must be png or raw, got {frame_format}")
    recipe = recipes.load(recipe)
    base_seed = recipe.seed if seed is None else seed
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    manifest = {
        "schema_version": 1,
        "recipe": recipe.name,
        "recipe_digest": recipe.digest(),
        "base_seed": base_seed,
        "frame_format": frame_format,
        "episodes": [],
    }
    for index in range(episodes):
        episode_dir = out / f"episode_{index}"
        episode_dir.mkdir(exist_ok=True)
        env = recipes.build(recipe, seed=base_seed + index)
        if image_size is not None:
            width = height = int(image_size)
        else:
            obs_spec = env.observation_spec()
            image_specs = [s for s in obs_spec.values() if len(s["shape"]) == 3]
            height, width = (image_specs[0]["shape"][:2] if image_specs else (256, 256))

        chosen = (random_policy(env, seed=base_seed + index)
                  if policy == "random" else policy)
        try:
            with open(episode_dir / LOG_NAME, "w", encoding="utf-8") as log:
                records = record_episode(env, chosen, sink=log, max_steps=max_steps)
        except OSError as err:
            raise SinkWriteError(f"{episode_dir / LOG_NAME}: {err}") from err

        frames = 0
        for record in records:
            frame = render_record(record, width, height, supersample)
            path = episode_dir / f"frame_{record['step_index']}.{ 'png' if frame_format == 'png' else 'rgb' }"
            try:
                if frame_format == "png":
                    path.write_bytes(encode_png(frame))
                else:
                    path.write_bytes(frame.tobytes())
            except OSError as err:
                raise SinkWriteError(f"{path}: {err}") from err
            frames += 1

        manifest["episodes"].append({
            "index": index,
            "seed": base_seed + index,
            "steps": len(records),
            "frames": frames,
            "reward_sum": _round9(sum(r["reward"] for r in records)),
        })

    try:
        (out / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n",
                                         encoding="utf-8")
    except OSError as err:
        raise SinkWriteError(f"{out / MANIFEST_NAME}: {err}") from err
    return manifest


def render_record(record, width, height, supersample=1):
    """Rasterize one logged step straight from its serialized sprites."""
    from .observers import _fill_polygon

    k = supersample
    buf_w, buf_h = width * k, height * k
    buffer = np.zeros((buf_h, buf_w, 3), dtype=np.float32)
    for entry in record["state"]:
        vertices = np.asarray(entry["vertices"], dtype=np.float64)
        pixels = np.empty_like(vertices)
        pixels[:, 0] = vertices[:, 0] * buf_w
        pixels[:, 1] = (1.0 - vertices[:, 1]) * buf_h
        _fill_polygon(buffer, pixels, (entry["c0"], entry["c1"], entry["c2"]),
                      entry["opacity"])
    if k > 1:
        buffer = buffer.reshape(height, k, width, k, 3).mean(axis=(1, 3))
    return np.clip(np.rint(buffer), 0, 255).astype(np.uint8)


def render_log(log_path, out_dir, width=256, height=256, supersample=1):
    """Re-render every step of an episode log to PNG frames (replay)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(log_path, encoding="utf-8") as handle:
        for line in handle:
            record = json.loads(line)
            frame = render_record(record, width, height, supersample)
            (out / f"frame_{record['step_index']}.png").write_bytes(encode_png(frame))
            count += 1
    return count


def replay_actions(log_path):
    """The (kind, action, reward) tape of a log, for re-simulation checks."""
    tape = []
    with open(log_path, encoding="utf-8") as handle:
        for line in handle:
            record = json.loads(line)
            tape.append((record["kind"], record["action"], record["reward"]))
    return tape

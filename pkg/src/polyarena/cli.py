"""Command line entry point.

Subcommands:
    serve    start the real-time play server for a recipe
    bench    measure steps-per-second including rasterization
    dataset  generate a procedural video dataset
    replay   re-render an episode log to PNG frames
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import recipes, recorder
from .observers import ImageObserver


def _recipe_arg(parser):
    parser.add_argument("--recipe", required=True,
                        help="builtin task name or path to a recipe JSON file")
    parser.add_argument("--seed", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="polyarena",
                                     description="2.5-D polygon game engine")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the WebSocket play server")
    _recipe_arg(serve)
    serve.add_argument("--fps", type=int, default=60)
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--static-dir", default=None,
                       help="directory of browser client files to serve at /")

    bench = sub.add_parser("bench", help="steps-per-second benchmark")
    _recipe_arg(bench)
    bench.add_argument("--size", type=int, default=512,
                       help="square render resolution (pixels)")
    bench.add_argument("--steps", type=int, default=1000)

    dataset = sub.add_parser("dataset", help="generate a video dataset")
    _recipe_arg(dataset)
    dataset.add_argument("--episodes", type=int, default=10)
    dataset.add_argument("--size", type=int, default=None)
    dataset.add_argument("--out", default="dataset_out")
    dataset.add_argument("--format", choices=("png", "raw"), default="png")

    replay = sub.add_parser("replay", help="render an episode log to frames")
    replay.add_argument("log", help="path to an episode.log file")
    replay.add_argument("--out", default="replay_out")
    replay.add_argument("--size", type=int, default=256)
    return parser


def run_bench(args):
    """Step the recipe with a random policy, rendering every frame."""
    env = recipes.build(args.recipe, seed=args.seed)
    env.observers = {"image": ImageObserver(args.size, args.size)}
    spec = env.action_spec()
    rng = np.random.Generator(np.random.PCG64(12345))
    env.reset()
    start = time.perf_counter()
    for _ in range(args.steps):
        env.step(spec.sample(rng))
    elapsed = time.perf_counter() - start
    fps = args.steps / elapsed
    print(f"{args.recipe}: {args.steps} steps at {args.size}x{args.size} "
          f"in {elapsed:.2f} s -> {fps:.1f} fps")
    return fps


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        from .server import serve

        static_dir = args.static_dir
        if static_dir is None:
            bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
            static_dir = str(bundled) if bundled.is_dir() else None
        print(f"serving {args.recipe!r} on ws://{args.host}:{args.port}/ws "
              f"at {args.fps} fps", flush=True)
        serve(args.recipe, port=args.port, fps=args.fps, seed=args.seed,
              static_dir=static_dir, host=args.host)
    elif args.command == "bench":
        run_bench(args)
    elif args.command == "dataset":
        manifest = recorder.generate_dataset(
            args.recipe, args.out, args.episodes, image_size=args.size,
            seed=args.seed, frame_format=args.format)
        total = sum(e["frames"] for e in manifest["episodes"])
        print(f"wrote {len(manifest['episodes'])} episodes "
              f"({total} frames) to {args.out}")
    elif args.command == "replay":
        count = recorder.render_log(args.log, args.out, args.size, args.size)
        print(f"rendered {count} frames to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

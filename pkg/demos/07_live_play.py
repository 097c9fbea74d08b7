"""Live human play over WebSocket.

Starts the real-time play server for a builtin task. With the browser
client built (see frontend/README.md) the game is playable at
http://127.0.0.1:8765/ ; without it, any WebSocket client can speak the
wire protocol directly at ws://127.0.0.1:8765/ws.

Equivalent CLI:  polyarena serve --recipe pong --fps 60 --port 8765
"""

import pathlib
import sys

from polyarena.server import serve

RECIPE = sys.argv[1] if len(sys.argv) > 1 else "pong"
DIST = pathlib.Path(__file__).resolve().parents[1] / "frontend" / "dist"

if __name__ == "__main__":
    static = str(DIST) if DIST.is_dir() else None
    if static is None:
        print("frontend/dist not found: serving the WebSocket endpoint only")
    print(f"serving {RECIPE!r} at ws://127.0.0.1:8765/ws (Ctrl-C stops)")
    serve(RECIPE, port=8765, fps=60, static_dir=static)

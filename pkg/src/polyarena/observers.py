"""Observers: turn a State into observations.

Three views are provided: a back-to-front vector display list (what the
play server streams), a rasterized RGB image, and a flat per-sprite
feature vector. Rendering is deterministic: identical states produce
byte-identical images.

Screen convention: the top image row is arena y = 1. A pixel is owned by
a polygon iff the pixel center is inside; centers exactly on an edge
follow the top-left rule so abutting polygons never both own a pixel.
"""

import io

import numpy as np
from PIL import Image

from .errors import CapacityExceeded


class Drawable:
    """One flat-colored polygon of the display list, world coordinates."""

    __slots__ = ("vertices", "color", "opacity")

    def __init__(self, vertices, color, opacity):
        self.vertices = vertices
        self.color = color
        self.opacity = opacity


def display_list(state):
    """One drawable per sprite, back-to-front."""
    return [Drawable(s.world_vertices(), s.color, s.opacity) for s in state.z_order()]


def _fill_polygon(buffer, vertices, color, opacity):
    """Composite one convex polygon onto a float32 H x W x 3 buffer.

    Vertices are in pixel coordinates (x right, y down). The inside test
    is the half-plane edge function evaluated at pixel centers.
    """
    height, width = buffer.shape[:2]
    min_x = max(int(np.floor(vertices[:, 0].min() - 0.5)), 0)
    max_x = min(int(np.ceil(vertices[:, 0].max() + 0.5)), width - 1)
    min_y = max(int(np.floor(vertices[:, 1].min() - 0.5)), 0)
    max_y = min(int(np.ceil(vertices[:, 1].max() + 0.5)), height - 1)
    if min_x > max_x or min_y > max_y:
        return

    px = np.arange(min_x, max_x + 1, dtype=np.float64) + 0.5
    py = np.arange(min_y, max_y + 1, dtype=np.float64) + 0.5
    first = vertices
    second = np.concatenate([vertices[1:], vertices[:1]])
    deltas = second - first
    keep = (deltas != 0).any(axis=1)
    first, deltas = first[keep], deltas[keep]
    # After the screen-space y flip the winding is clockwise, so the
    # interior is where the edge function is negative. Centers exactly on
    # an edge count only for top (dy==0, dx<0) and left (dy>0) edges.
    row_term = deltas[:, 0, None] * (py[None, :] - first[:, 1, None])
    col_term = deltas[:, 1, None] * (px[None, :] - first[:, 0, None])
    edge = row_term[:, :, None] - col_term[:, None, :]
    owns = (deltas[:, 1] > 0) | ((deltas[:, 1] == 0) & (deltas[:, 0] < 0))
    inside = ((edge < 0) | ((edge == 0) & owns[:, None, None])).all(axis=0)
    if not inside.any():
        return

    window = buffer[min_y:max_y + 1, min_x:max_x + 1]
    rgb = np.array(color, dtype=buffer.dtype)
    if opacity >= 255:
        window[inside] = rgb
    elif opacity > 0:
        alpha = np.float32(opacity / 255.0)
        window[inside] = rgb * alpha + window[inside] * (np.float32(1.0) - alpha)


def rasterize(state, width, height, supersample=1):
    """Scanline-fill the display list into an RGB uint8 image.

    Black background; later drawables paint over earlier ones; opacity
    alpha-blends source over destination. supersample in {1, 2, 4} renders
    at k x resolution and box-averages down.
    """
    if width < 1 or height < 1:
        raise ValueError(f"image size must be >= 1, got {width}x{height}")
    if supersample not in (1, 2, 4):
        raise ValueError(f"supersample must be 1, 2 or 4, got {supersample}")
    k = supersample
    buf_w, buf_h = width * k, height * k
    drawables = display_list(state)
    # Fully opaque sprites at native resolution write uint8 directly; the
    # float compositing buffer is only needed for alpha or supersampling.
    fast = k == 1 and all(d.opacity in (0, 255) for d in drawables)
    buffer = np.zeros((buf_h, buf_w, 3), dtype=np.uint8 if fast else np.float32)
    for drawable in drawables:
        pixels = np.empty_like(drawable.vertices)
        pixels[:, 0] = drawable.vertices[:, 0] * buf_w
        pixels[:, 1] = (1.0 - drawable.vertices[:, 1]) * buf_h
        _fill_polygon(buffer, pixels, drawable.color, drawable.opacity)
    if fast:
        return buffer
    if k > 1:
        buffer = buffer.reshape(height, k, width, k, 3).mean(axis=(1, 3))
    return np.clip(np.rint(buffer), 0, 255).astype(np.uint8)


def encode_png(image):
    """Lossless PNG bytes for an H x W x 3 uint8 array."""
    out = io.BytesIO()
    Image.fromarray(image, mode="RGB").save(out, format="PNG")
    return out.getvalue()


class ImageObserver:
    """Renderer observer: state -> H x W x 3 uint8 image."""

    def __init__(self, width=256, height=256, supersample=1):
        self.width = int(width)
        self.height = int(height)
        self.supersample = int(supersample)

    def __call__(self, state):
        return rasterize(state, self.width, self.height, self.supersample)

    def spec(self):
        return {"shape": (self.height, self.width, 3), "dtype": "uint8"}


_FIELD_GETTERS = {
    "x": lambda s: s.position[0],
    "y": lambda s: s.position[1],
    "angle": lambda s: s.angle,
    "scale": lambda s: s.scale,
    "x_vel": lambda s: s.velocity[0],
    "y_vel": lambda s: s.velocity[1],
    "angular_vel": lambda s: s.angular_velocity,
    "mass": lambda s: s.mass,
    "c0": lambda s: s.color[0],
    "c1": lambda s: s.color[1],
    "c2": lambda s: s.color[2],
    "opacity": lambda s: s.opacity,
}

FEATURE_FIELDS = tuple(_FIELD_GETTERS)


class FeatureObserver:
    """Flat numeric view: chosen fields of every sprite in z-order, padded
    with `pad` out to a fixed max sprite count.

    The default pad of -1 is distinguishable from any valid arena
    coordinate in [0, 1].
    """

    def __init__(self, fields=("x", "y"), max_sprites=16, pad=-1.0):
        unknown = [f for f in fields if f not in _FIELD_GETTERS]
        if unknown:
            raise ValueError(f"unknown feature fields {unknown}")
        self.fields = tuple(fields)
        self.max_sprites = int(max_sprites)
        self.pad = float(pad)

    def __call__(self, state):
        sprites = state.z_order()
        if len(sprites) > self.max_sprites:
            raise CapacityExceeded(
                f"{len(sprites)} sprites exceed capacity {self.max_sprites}")
        out = np.full(self.max_sprites * len(self.fields), self.pad)
        for i, sprite in enumerate(sprites):
            for j, field in enumerate(self.fields):
                out[i * len(self.fields) + j] = _FIELD_GETTERS[field](sprite)
        return out

    def spec(self):
        return {"shape": (self.max_sprites * len(self.fields),), "dtype": "float64"}

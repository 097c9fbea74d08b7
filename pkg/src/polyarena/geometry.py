"""Planar geometry: polygon measures, pose transforms, containment and
convex-polygon contact detection.

Conventions used across the engine:

* Points and vectors are numpy float64 arrays of shape (2,); vertex
  sequences are arrays of shape (N, 2) in counter-clockwise winding.
* Coordinates are arena widths: the visible playfield is the unit square.
* All functions here are pure, so they are safe for concurrent callers.
"""

import math

import numpy as np

from .errors import DegeneratePolygon, NonPositiveMass, NonPositiveScale

_AREA_EPS = 1e-12
_TOUCH_EPS = 1e-12
_CENTROID_EPS = 1e-9


def vec2(x, y):
    """Build a 2-vector, rejecting NaN/Inf (they must never enter engine state)."""
    v = np.array([x, y], dtype=np.float64)
    if not np.isfinite(v).all():
        raise ValueError(f"non-finite vector ({x}, {y})")
    return v


def as_vertices(vertices):
    """Coerce a vertex sequence to a float64 (N, 2) array."""
    v = np.asarray(vertices, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] != 2:
        raise DegeneratePolygon(f"expected (N, 2) vertices, got shape {v.shape}")
    return v


def cross2(a, b):
    """Scalar z-component of the 2-D cross product."""
    return a[0] * b[1] - a[1] * b[0]


def area_and_centroid(vertices):
    """Shoelace area (absolute) and area centroid of a simple polygon.

    Raises DegeneratePolygon when |signed area| < 1e-12.
    """
    v = as_vertices(vertices)
    if len(v) < 3:
        raise DegeneratePolygon(f"need >= 3 vertices, got {len(v)}")
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    signed = 0.5 * cross.sum()
    if abs(signed) < _AREA_EPS:
        raise DegeneratePolygon(f"degenerate polygon, |area| = {abs(signed):.3g}")
    cx = ((x + xn) * cross).sum() / (6.0 * signed)
    cy = ((y + yn) * cross).sum() / (6.0 * signed)
    return abs(signed), np.array([cx, cy])


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * (x * np.roll(y, -1) - np.roll(x, -1) * y).sum()


class Polygon:
    """Convex polygon in its local frame: CCW winding, centroid at the origin.

    Construction re-centers the vertices on the area centroid and validates
    convexity; contact detection relies on both properties.
    """

    __slots__ = ("vertices", "area", "unit_inertia")

    def __init__(self, vertices):
        v = as_vertices(vertices)
        area, centroid = area_and_centroid(v)
        if _signed_area(v) < 0:
            raise DegeneratePolygon("vertices wind clockwise; CCW required")
        edges = np.roll(v, -1, axis=0) - v
        turns = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if (turns < -_AREA_EPS).any():
            raise DegeneratePolygon("polygon is not convex")
        self.vertices = v - centroid
        self.vertices.setflags(write=False)
        self.area = area
        self.unit_inertia = _polygon_unit_inertia(self.vertices)

    def __repr__(self):
        return f"Polygon({len(self.vertices)} vertices, area={self.area:.4g})"


def _polygon_unit_inertia(vertices):
    """Second polar moment about the centroid per unit mass.

    Closed form from the fan triangulation of the polygon; vertices must
    already be centered on the centroid.
    """
    v = vertices
    vn = np.roll(v, -1, axis=0)
    cross = v[:, 0] * vn[:, 1] - vn[:, 0] * v[:, 1]
    dots = (v * v).sum(axis=1) + (v * vn).sum(axis=1) + (vn * vn).sum(axis=1)
    numer = (cross * dots).sum()
    denom = 6.0 * cross.sum()
    return numer / denom


def moment_of_inertia(polygon, mass):
    """Moment of inertia about the centroid for a polygon of the given mass."""
    if not mass > 0:
        raise NonPositiveMass(f"mass must be > 0, got {mass}")
    if math.isinf(mass):
        return math.inf
    return mass * polygon.unit_inertia


def world_vertices(polygon, position, angle, scale):
    """Map local vertices into the world frame: position + scale * R(angle) * v."""
    if not scale > 0:
        raise NonPositiveScale(f"scale must be > 0, got {scale}")
    verts = polygon.vertices if isinstance(polygon, Polygon) else as_vertices(polygon)
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return verts @ (scale * rot).T + np.asarray(position, dtype=np.float64)


def point_in_polygon(point, world_verts):
    """True iff point is strictly inside or on the boundary of a convex polygon."""
    v = as_vertices(world_verts)
    p = np.asarray(point, dtype=np.float64)
    edges = np.roll(v, -1, axis=0) - v
    rel = p - v
    cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
    return bool((cross >= -_TOUCH_EPS).all())


class Contact:
    """Collision manifold for one convex pair.

    normal: unit vector pointing from body A toward body B.
    depth:  overlap along the normal, arena widths, > 0.
    point:  deepest vertex of the incident body, world frame.
    """

    __slots__ = ("normal", "depth", "point")

    def __init__(self, normal, depth, point):
        self.normal = normal
        self.depth = depth
        self.point = point

    def __repr__(self):
        return (f"Contact(normal=({self.normal[0]:+.4f}, {self.normal[1]:+.4f}), "
                f"depth={self.depth:.5f})")


def _edge_normals(v):
    """Outward unit normals of a CCW polygon's edges."""
    edges = np.concatenate([v[1:], v[:1]]) - v
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    lengths = np.sqrt((normals * normals).sum(axis=1))
    keep = lengths > _AREA_EPS
    return normals[keep] / lengths[keep, None]


def detect_contact(verts_a, verts_b):
    """Separating-axis test over both polygons' edge normals.

    Returns None when a separating axis exists (or overlap <= 1e-12);
    otherwise a Contact whose normal is the minimum-penetration axis
    oriented from A toward B. Equal minimum overlaps break ties toward
    the earliest axis (A's edges in order, then B's), which keeps the
    result deterministic for symmetric configurations.
    """
    a = as_vertices(verts_a)
    b = as_vertices(verts_b)

    # Disjoint bounding boxes guarantee a separating axis exists.
    min_a, max_a = a.min(axis=0), a.max(axis=0)
    min_b, max_b = b.min(axis=0), b.max(axis=0)
    if (min_a > max_b).any() or (min_b > max_a).any():
        return None

    axes_a = _edge_normals(a)
    axes_b = _edge_normals(b)
    axes = np.concatenate([axes_a, axes_b], axis=0)

    proj_a = a @ axes.T
    proj_b = b @ axes.T
    overlap = (np.minimum(proj_a.max(axis=0), proj_b.max(axis=0))
               - np.maximum(proj_a.min(axis=0), proj_b.min(axis=0)))
    if (overlap <= _TOUCH_EPS).any():
        return None

    best = int(np.argmin(overlap))
    normal = axes[best].copy()
    depth = float(overlap[best])
    reference_is_a = best < len(axes_a)

    # Orient the normal from A toward B using the offset between interior
    # points (vertex means); a zero offset (coincident bodies) keeps the
    # axis as computed.
    if float(normal @ (b.mean(axis=0) - a.mean(axis=0))) < 0:
        normal = -normal

    if reference_is_a:
        incident = b
        point = incident[int(np.argmin(incident @ normal))]
    else:
        incident = a
        point = incident[int(np.argmax(incident @ normal))]
    return Contact(normal, depth, point.copy())


# --- named shape library -----------------------------------------------------
#
# Built-in shapes are convex only; anything round is a regular 24-gon.
# Each shape is normalized so the longer side of its bounding box is 1,
# which makes a sprite scale of 0.1 a side-length of 0.1 arena widths.

def _normalized(vertices):
    v = as_vertices(vertices)
    span = (v.max(axis=0) - v.min(axis=0)).max()
    return Polygon(v / span)


def _regular_ngon(n, phase=0.0):
    angles = phase + 2.0 * np.pi * np.arange(n) / n
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


SHAPES = {
    "square": _normalized([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]),
    "circle": _normalized(_regular_ngon(24)),
    "triangle": _normalized(_regular_ngon(3, phase=np.pi / 2)),
    "pentagon": _normalized(_regular_ngon(5, phase=np.pi / 2)),
}

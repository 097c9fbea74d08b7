"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the engine's own formulas: polygon
inertia comes from slab-wise numeric double integration, containment from
a winding-number walk, and areas can be cross-checked by Monte Carlo
counting. Tests freeze expected values computed by these oracles.
"""

import numpy as np
import pytest
from scipy.spatial import ConvexHull


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_convex_polygon(rng, n_points=8, radius=0.5):
    """Convex hull of gaussian points, CCW, roughly `radius` sized."""
    while True:
        points = rng.normal(size=(n_points, 2)) * radius
        hull = ConvexHull(points)
        verts = points[hull.vertices]  # ConvexHull returns CCW order in 2-D
        if len(verts) >= 3:
            return verts


def winding_number_contains(point, vertices):
    """Crossing-count containment oracle (nonzero winding)."""
    x, y = point
    winding = 0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if y1 <= y < y2 or y2 <= y < y1:
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x_cross > x:
                winding += 1 if y2 > y1 else -1
    return winding != 0


def _vertical_span(vertices, x):
    """[y_lo, y_hi] of a convex polygon sliced at the vertical line x."""
    ys = []
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if x1 == x2:
            if x1 == x:
                ys.extend([y1, y2])
        elif min(x1, x2) <= x <= max(x1, x2):
            ys.append(y1 + (x - x1) * (y2 - y1) / (x2 - x1))
    return min(ys), max(ys)


def inertia_by_quadrature(vertices, mass):
    """Numeric double integral of r^2 over the polygon, about the origin.

    Inner y-integral is analytic per slab; the outer x-integral uses
    Gauss-Legendre nodes between consecutive vertex abscissae, where the
    integrand is polynomial, so the quadrature is essentially exact.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    xs = np.sort(np.unique(vertices[:, 0]))
    nodes, weights = np.polynomial.legendre.leggauss(10)
    second_moment = 0.0
    area = 0.0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        if x1 - x0 < 1e-14:
            continue
        mid, half = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
        for t, w in zip(nodes, weights):
            x = mid + half * t
            y_lo, y_hi = _vertical_span(vertices, x)
            area += w * half * (y_hi - y_lo)
            second_moment += w * half * (x * x * (y_hi - y_lo)
                                         + (y_hi ** 3 - y_lo ** 3) / 3.0)
    return mass * second_moment / area


def winding_contains_many(points, vertices):
    """Vectorized winding-number containment for a batch of points."""
    x, y = points[:, 0], points[:, 1]
    winding = np.zeros(len(points), dtype=int)
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        upward = (y1 <= y) & (y < y2)
        downward = (y2 <= y) & (y < y1)
        if y1 == y2:
            continue
        x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        winding += np.where(upward & (x_cross > x), 1, 0)
        winding -= np.where(downward & (x_cross > x), 1, 0)
    return winding != 0


def monte_carlo_area(vertices, samples, rng):
    """Area estimate by point counting, independent of the engine: uses the
    winding oracle, not the engine's containment test."""
    vertices = np.asarray(vertices, dtype=np.float64)
    lo, hi = vertices.min(axis=0), vertices.max(axis=0)
    points = rng.uniform(lo, hi, size=(samples, 2))
    hits = winding_contains_many(points, vertices).sum()
    box = np.prod(hi - lo)
    return box * hits / samples


@pytest.fixture
def rng():
    return rng_for(20240811)

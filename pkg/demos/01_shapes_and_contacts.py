"""Shapes, measures, and contact detection.

Walks through the geometry toolbox: the named shape library, polygon
area/inertia, pose transforms, and separating-axis contact detection
between convex polygons. Saves a rendered overview to demos/output/.
"""

import pathlib

import numpy as np

from polyarena import geometry
from polyarena.observers import encode_png, rasterize
from polyarena.sprites import State, make_sprite

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

print("== named shapes ==")
for name, poly in geometry.SHAPES.items():
    inertia = geometry.moment_of_inertia(poly, mass=1.0)
    print(f"{name:9s} vertices={len(poly.vertices):2d} area={poly.area:.4f} "
          f"inertia/m={inertia:.5f}")

print("\n== pose transform ==")
square = geometry.SHAPES["square"]
world = geometry.world_vertices(square, position=(0.1, 0.1), angle=0.0, scale=0.1)
print("a scale-0.1 square at (0.1, 0.1) spans",
      world.min(axis=0).round(3), "to", world.max(axis=0).round(3))

print("\n== separating-axis contacts ==")
a = geometry.world_vertices(square, (0.40, 0.5), 0.0, 0.2)
for x, label in [(0.70, "far apart"), (0.58, "overlapping"), (0.40, "coincident")]:
    b = geometry.world_vertices(square, (x, 0.5), 0.0, 0.2)
    contact = geometry.detect_contact(a, b)
    if contact is None:
        print(f"x={x:.2f} ({label}): no contact")
    else:
        print(f"x={x:.2f} ({label}): normal=({contact.normal[0]:+.2f}, "
              f"{contact.normal[1]:+.2f}) depth={contact.depth:.3f}")

# A little gallery: one sprite per shape, rendered to a PNG.
gallery = State([("row", [
    make_sprite(x=0.125 + 0.25 * i, y=0.5, shape=name, scale=0.2,
                c0=60 * i, c1=255 - 50 * i, c2=120)
    for i, name in enumerate(geometry.SHAPES)
])])
(OUT / "shape_gallery.png").write_bytes(encode_png(rasterize(gallery, 512, 512)))
print(f"\nwrote {OUT / 'shape_gallery.png'}")

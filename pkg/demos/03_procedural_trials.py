"""Compositional distributions: randomized trial conditions.

Shows the distribution combinators that drive per-trial procedural
generation, including a SetMinus hold-out (the train/test split tool:
train on everything except red-ish hues, test on the hold-out) and
disjoint placement. Renders a 3x3 contact sheet of sampled states.
"""

import pathlib

import numpy as np

from polyarena.observers import rasterize, encode_png
from polyarena.procgen import (Discrete, Mixture, Product, SetMinus,
                               SpriteGenerator, Uniform)
from polyarena.sprites import State

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rng = np.random.Generator(np.random.PCG64(21))

# Train-time colors: anything but strong red.
any_red = Uniform("c0", 180, 255)
train_colors = SetMinus(Product(Uniform("c0", 0, 255), Uniform("c1", 0, 255)),
                        any_red)
print("20 train-split c0 draws (all < 180):")
draws = [round(train_colors.sample(rng)["c0"]) for _ in range(20)]
print(draws)
assert all(c < 180 for c in draws)

# Mixture: mostly small circles, occasionally a big pentagon.
body = Mixture(
    components=[
        Product(Discrete("shape", ["circle"]), Discrete("scale", [0.06])),
        Product(Discrete("shape", ["pentagon"]), Discrete("scale", [0.16])),
    ],
    weights=[0.8, 0.2],
)

factors = Product(
    Uniform("x", 0.12, 0.88), Uniform("y", 0.12, 0.88),
    Uniform("angle", 0, 2 * np.pi), body,
    Uniform("c2", 80, 255),
)
generator = SpriteGenerator(count=Discrete("count", [4, 5, 6, 7]),
                            factors=factors, disjoint=True, max_rejections=300)

tiles = []
for i in range(9):
    layer = generator.generate(rng)
    tiles.append(rasterize(State([("stuff", layer)]), 128, 128))
    print(f"sample {i}: {len(layer)} sprites, "
          f"shapes={sorted({len(s.shape.vertices) for s in layer})}")

sheet = np.vstack([np.hstack(tiles[r * 3:(r + 1) * 3]) for r in range(3)])
(OUT / "procedural_sheet.png").write_bytes(encode_png(sheet))
print(f"wrote {OUT / 'procedural_sheet.png'}")

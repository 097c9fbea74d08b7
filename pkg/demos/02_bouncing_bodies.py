"""Impulse physics: elastic bodies in a box.

Drops five spinning polygons into a walled arena and steps the physics
directly (no environment needed), checking that momentum-conserving
impulses keep the motion alive. Saves a filmstrip of frames.
"""

import pathlib

import numpy as np

from polyarena.observers import encode_png, rasterize
from polyarena.physics import Collision, step_physics
from polyarena.procgen import Discrete, Product, SpriteGenerator, Uniform
from polyarena.sprites import State, make_sprite

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rng = np.random.Generator(np.random.PCG64(4))

wall = dict(scale=1.0, mass=float("inf"), c0=110, c1=110, c2=110)
vertical = [(-0.02, -0.6), (0.02, -0.6), (0.02, 0.6), (-0.02, 0.6)]
horizontal = [(-0.6, -0.02), (0.6, -0.02), (0.6, 0.02), (-0.6, 0.02)]
walls = [make_sprite(vertices=vertical, x=0.0, y=0.5, **wall),
         make_sprite(vertices=vertical, x=1.0, y=0.5, **wall),
         make_sprite(vertices=horizontal, x=0.5, y=0.0, **wall),
         make_sprite(vertices=horizontal, x=0.5, y=1.0, **wall)]

movers = SpriteGenerator(
    count=5,
    factors=Product(
        Uniform("x", 0.2, 0.8), Uniform("y", 0.2, 0.8),
        Discrete("shape", ["square", "triangle", "pentagon"]),
        Discrete("scale", [0.12]),
        Uniform("angle", 0.0, 2 * np.pi),
        Uniform("x_vel", -0.012, 0.012), Uniform("y_vel", -0.012, 0.012),
        Uniform("angular_vel", -0.08, 0.08),
        Discrete("c0", [230]), Discrete("c1", [160]),
    ),
    disjoint=True, max_rejections=300,
).generate(rng, existing=walls)

state = State([("walls", walls), ("movers", movers)])
forces = [Collision(("movers", "movers"), elasticity=1.0, update_angular=True),
          Collision(("movers", "walls"), elasticity=1.0, update_angular=True)]


def kinetic_energy():
    return sum(0.5 * s.mass * float(s.velocity @ s.velocity)
               + 0.5 * s.inertia * s.angular_velocity ** 2
               for s in state.sprites("movers"))


print(f"initial kinetic energy: {kinetic_energy():.3e}")
for step in range(240):
    step_physics(state, forces)
    if step % 60 == 0:
        frame = rasterize(state, 256, 256)
        (OUT / f"bounce_{step:03d}.png").write_bytes(encode_png(frame))

speeds = [float(np.linalg.norm(s.velocity)) for s in state.sprites("movers")]
print(f"kinetic energy after 240 steps of elastic bouncing: {kinetic_energy():.3e}")
print("speeds still nonzero:", [round(v, 4) for v in speeds])
print(f"wrote 4 frames to {OUT}/bounce_*.png")

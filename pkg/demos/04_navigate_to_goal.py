"""The navigate-to-goal task, end to end.

Builds the builtin recipe (a green circle steered by joystick toward a
red square; drag limits the speed; contact pays 1.0 and the trial resets
five steps later), runs a scripted straight-line policy, and prints the
reward timeline. Saves first/contact/last frames.
"""

import pathlib

import numpy as np

import polyarena as pa
from polyarena.observers import encode_png

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

env = pa.build("navigate_to_goal")
print("action spec :", env.action_spec().to_json())
print("observation :", env.observation_spec())

ts = env.reset()
(OUT / "nav_first.png").write_bytes(encode_png(ts.observations["image"]))

toward_goal = np.array([-1.0, -1.0]) / np.sqrt(2)
timeline = []
while not ts.last():
    ts = env.step(toward_goal)
    timeline.append(ts)
    if ts.reward:
        (OUT / "nav_contact.png").write_bytes(encode_png(ts.observations["image"]))

(OUT / "nav_last.png").write_bytes(encode_png(ts.observations["image"]))

line = "".join("#" if t.reward else ("|" if t.last() else ".") for t in timeline)
print(f"\nsteps: {line}   (. = step, # = reward, | = trial end)")
contact = next(i for i, t in enumerate(timeline) if t.reward)
print(f"reward 1.0 at step {contact + 1}; trial ended at step {len(timeline)} "
      f"({len(timeline) - contact - 1} steps after contact)")
print(f"frames in {OUT}/nav_*.png")

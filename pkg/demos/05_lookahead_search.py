"""Ground-truth simulation: planning with environment clones.

clone_for_simulation() gives an exact, isolated copy of a live
environment, which turns the engine into its own transition model. Here a
1-step lookahead over a 3x3 joystick grid plays navigate-to-goal and is
compared against a random policy; the clone never disturbs the live
episode, so this is legal online planning.
"""

import numpy as np

import polyarena as pa
from polyarena.observers import FeatureObserver

ACTIONS = [np.array([dx, dy]) for dx in (-1.0, 0.0, 1.0) for dy in (-1.0, 0.0, 1.0)]


def lookahead_policy(env):
    """Pick the action whose simulated next step scores best; break ties
    toward progress (smaller agent-goal distance)."""
    best, best_key = None, None
    for action in ACTIONS:
        clone = env.clone_for_simulation()
        ts = clone.step(action)
        goal, agent = ts.observations["features"][:2], ts.observations["features"][2:4]
        key = (-ts.reward, float(np.linalg.norm(agent - goal)))
        if best_key is None or key < best_key:
            best, best_key = action, key
    return best


def run(policy, label, seed=0, cap=200):
    env = pa.build("navigate_to_goal", seed=seed)
    env.observers = {"features": FeatureObserver(("x", "y"), max_sprites=4)}
    ts = env.reset()
    rng = np.random.Generator(np.random.PCG64(seed))
    for step in range(1, cap + 1):
        action = policy(env) if policy else rng.uniform(-1, 1, 2)
        ts = env.step(action)
        if ts.last():
            print(f"{label:12s} solved in {step} steps")
            return step
    print(f"{label:12s} unsolved after {cap} steps")
    return cap


planned = run(lookahead_policy, "lookahead")
random_steps = run(None, "random")
print(f"\n1-step search beats random by {random_steps / planned:.1f}x here, "
      "using nothing but clones of the live environment")

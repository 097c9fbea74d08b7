"""Tasks: reward computation and trial termination.

A task reads the post-physics state each step and returns a TaskVerdict;
it never mutates the state. Per-trial memory (whether the contact reward
already fired, countdowns) is cleared by reset(), which the environment
calls whenever a new trial starts.
"""

from .physics import contacting_pairs


class TaskVerdict:
    """reward for this step; reset=True ends the trial now; reset_countdown
    is the number of steps left until a scheduled reset, when one is pending."""

    __slots__ = ("reward", "reset", "reset_countdown")

    def __init__(self, reward=0.0, reset=False, reset_countdown=None):
        self.reward = float(reward)
        self.reset = bool(reset)
        self.reset_countdown = reset_countdown

    def __repr__(self):
        return (f"TaskVerdict(reward={self.reward}, reset={self.reset}, "
                f"countdown={self.reset_countdown})")


class Task:
    def reset(self, state):
        pass

    def verdict(self, state, step_index):
        raise NotImplementedError


class ContactReward(Task):
    """Reward when a layer_a sprite touches a layer_b sprite.

    Default mode pays once per trial on the first contact step, then (if
    reset_steps_after_contact is set) schedules the trial to end that many
    steps later; sustained contact earns nothing extra. per_pair mode pays
    per newly contacted (a, b) sprite pair instead, for pellet-style tasks
    where a rule removes the contacted sprites anyway.
    """

    def __init__(self, reward, layer_a, layer_b,
                 reset_steps_after_contact=None, per_pair=False):
        self.reward = float(reward)
        self.layer_a = layer_a
        self.layer_b = layer_b
        self.reset_steps = reset_steps_after_contact
        self.per_pair = bool(per_pair)
        self.reset(None)

    def reset(self, state):
        self._fired = False
        self._countdown = None
        self._seen_pairs = set()

    def verdict(self, state, step_index):
        reward = 0.0
        contacts = contacting_pairs(state, self.layer_a, self.layer_b)
        if self.per_pair:
            new = [(a.id, b.id) for a, b, _ in contacts
                   if (a.id, b.id) not in self._seen_pairs]
            self._seen_pairs.update(new)
            reward = self.reward * len(new)
            first_fire = bool(new) and not self._fired
        else:
            first_fire = bool(contacts) and not self._fired
            if first_fire:
                reward = self.reward
        if first_fire:
            self._fired = True
            if self.reset_steps is not None:
                self._countdown = self.reset_steps
        elif self._countdown is not None and self._countdown > 0:
            self._countdown -= 1
        return TaskVerdict(reward, reset=self._countdown == 0,
                           reset_countdown=self._countdown)


class AvoidContact(Task):
    """Penalty (once per step, however many pairs touch) when layer_a
    sprites contact layer_b sprites; optionally ends the trial."""

    def __init__(self, penalty, layer_a, layer_b, terminate_on_contact=False):
        self.penalty = float(penalty)
        self.layer_a = layer_a
        self.layer_b = layer_b
        self.terminate_on_contact = bool(terminate_on_contact)

    def verdict(self, state, step_index):
        touched = bool(contacting_pairs(state, self.layer_a, self.layer_b))
        return TaskVerdict(self.penalty if touched else 0.0,
                           reset=touched and self.terminate_on_contact)


class Timeout(Task):
    """Ends the trial at step_index == max_steps with zero reward."""

    def __init__(self, max_steps):
        if max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {max_steps}")
        self.max_steps = int(max_steps)

    def verdict(self, state, step_index):
        return TaskVerdict(0.0, reset=step_index >= self.max_steps)


class CompositeTask(Task):
    """Sum of sub-task rewards; resets when any sub-task does."""

    def __init__(self, subtasks):
        subtasks = list(subtasks)
        if not subtasks:
            raise ValueError("composite task needs at least one sub-task")
        self.subtasks = subtasks

    def reset(self, state):
        for task in self.subtasks:
            task.reset(state)

    def verdict(self, state, step_index):
        verdicts = [task.verdict(state, step_index) for task in self.subtasks]
        countdowns = [v.reset_countdown for v in verdicts if v.reset_countdown is not None]
        return TaskVerdict(sum(v.reward for v in verdicts),
                           reset=any(v.reset for v in verdicts),
                           reset_countdown=min(countdowns) if countdowns else None)

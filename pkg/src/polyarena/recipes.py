"""Recipes: one task, one file.

A recipe is a declarative JSON-compatible document of tagged nodes
({"type": ..., "params": {...}}) naming the state initializer, forces,
task, action space, observers and rules of a complete environment.
build() wires it into a live Environment; five builtin task documents
ship with the package.

Masses may be given as the string "inf" for anchored bodies, since JSON
has no infinity literal.
"""

import hashlib
import json
from importlib import resources

import numpy as np

from . import action_spaces, observers, physics, procgen, rules, sprites, tasks
from .environment import Environment
from .errors import SchemaError, UnknownBuiltin, UnknownComponentName

SCHEMA_VERSION = 1

BUILTIN_NAMES = ("navigate_to_goal", "pong", "red_green", "pacman", "collisions")


class Recipe:
    """A validated recipe document plus its canonical serialization."""

    def __init__(self, document):
        self.document = _validate(document)

    @property
    def name(self):
        return self.document["name"]

    @property
    def seed(self):
        return self.document.get("seed", 0)

    def serialize(self):
        """Canonical (sorted, compact) JSON text; stable across round trips."""
        return json.dumps(self.document, sort_keys=True, separators=(",", ":"))

    def digest(self):
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def replace(self, **top_level):
        """New Recipe with top-level document entries swapped out."""
        doc = json.loads(self.serialize())
        doc.update(top_level)
        return Recipe(doc)

    def __eq__(self, other):
        return isinstance(other, Recipe) and self.document == other.document

    def __repr__(self):
        return f"Recipe({self.name!r})"


def parse(source):
    """Recipe from a document dict, JSON text, or a path to a JSON file."""
    if isinstance(source, Recipe):
        return source
    if isinstance(source, dict):
        return Recipe(source)
    text = source
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and not source.lstrip().startswith("{"):
        with open(source, encoding="utf-8") as handle:
            text = handle.read()
    return Recipe(json.loads(text))


def builtin(name):
    """One of the packaged example tasks; see BUILTIN_NAMES."""
    if name not in BUILTIN_NAMES:
        raise UnknownBuiltin(f"no builtin named {name!r}; have {BUILTIN_NAMES}")
    doc = resources.files(__package__).joinpath(f"builtin_tasks/{name}.json").read_text()
    return Recipe(json.loads(doc))


def load(source):
    """Recipe from a builtin name, path, document or JSON text."""
    if isinstance(source, str) and source in BUILTIN_NAMES:
        return builtin(source)
    return parse(source)


# --- validation ---------------------------------------------------------------

def _fail(path, message):
    raise SchemaError(path, message)


def _expect(doc, key, kinds, path, required=True, default=None):
    if key not in doc:
        if required:
            _fail(f"{path}/{key}", "missing required field")
        return default
    value = doc[key]
    if kinds is not None and not isinstance(value, kinds):
        _fail(f"{path}/{key}", f"expected {kinds}, got {type(value).__name__}")
    return value


def _check_node(node, path):
    if not isinstance(node, dict):
        _fail(path, "expected a tagged node object")
    if not isinstance(node.get("type"), str):
        _fail(f"{path}/type", "missing component type name")
    params = node.get("params", {})
    if not isinstance(params, dict):
        _fail(f"{path}/params", "params must be an object")
    return node["type"], params


def _check_layer_ref(layer, declared, path):
    if layer not in declared:
        _fail(path, f"layer {layer!r} is not declared in the initializer")


def _validate(doc):
    if not isinstance(doc, dict):
        _fail("/", "recipe must be an object")
    version = _expect(doc, "schema_version", int, "")
    if version != SCHEMA_VERSION:
        _fail("/schema_version", f"unsupported version {version}")
    _expect(doc, "name", str, "")
    layers = _expect(doc, "layers", list, "")
    if not layers:
        _fail("/layers", "need at least one layer")
    declared = []
    for i, layer in enumerate(layers):
        name = _expect(layer, "name", str, f"/layers/{i}")
        if name in declared:
            _fail(f"/layers/{i}/name", f"duplicate layer {name!r}")
        declared.append(name)
        if "sprites" not in layer and "generator" not in layer:
            # An intentionally empty layer is allowed (e.g. a cursor layer).
            continue
        _expect(layer, "sprites", list, f"/layers/{i}", required=False)
        if "generator" in layer:
            _check_node(layer["generator"], f"/layers/{i}/generator")
    declared = set(declared)

    _expect(doc, "task", dict, "")
    _check_node(doc["task"], "/task")
    _expect(doc, "action_space", dict, "")
    _check_node(doc["action_space"], "/action_space")
    observer_nodes = _expect(doc, "observers", dict, "")
    if not observer_nodes:
        _fail("/observers", "need at least one observer")
    for name, node in observer_nodes.items():
        _check_node(node, f"/observers/{name}")
    for i, node in enumerate(doc.get("forces", [])):
        _check_node(node, f"/forces/{i}")
    for i, node in enumerate(doc.get("rules", [])):
        _check_node(node, f"/rules/{i}")

    # Building against the declared layers performs the deep validation
    # (component names, per-component params, layer references).
    _Builder(doc, declared).build_components(np_seed=0)
    return doc


# --- component builders ---------------------------------------------------------

def _float(value):
    if value == "inf":
        return float("inf")
    return float(value)


class _Builder:
    def __init__(self, doc, declared_layers):
        self.doc = doc
        self.layers = declared_layers

    # distributions ------------------------------------------------------------

    def distribution(self, node, path, key=None):
        kind, params = _check_node(node, path)
        if kind == "uniform":
            k = params.get("key", key)
            if k is None:
                _fail(f"{path}/key", "uniform needs a key")
            return procgen.Uniform(k, _float(params["lo"]), _float(params["hi"]))
        if kind == "discrete":
            k = params.get("key", key)
            if k is None:
                _fail(f"{path}/key", "discrete needs a key")
            return procgen.Discrete(k, params["values"], params.get("weights"))
        if kind == "product":
            return procgen.Product(*(self.distribution(sub, f"{path}/components/{i}", key)
                                     for i, sub in enumerate(params["components"])))
        if kind == "mixture":
            components = [self.distribution(sub, f"{path}/components/{i}", key)
                          for i, sub in enumerate(params["components"])]
            return procgen.Mixture(components, params.get("weights"))
        if kind == "set_minus":
            return procgen.SetMinus(self.distribution(params["base"], f"{path}/base", key),
                                    self.distribution(params["hold_out"], f"{path}/hold_out", key))
        if kind == "factors":
            parts = []
            for factor_key, value in params.items():
                if isinstance(value, dict):
                    parts.append(self.distribution(value, f"{path}/{factor_key}", factor_key))
                else:
                    parts.append(procgen.Discrete(factor_key, [value]))
            return procgen.Product(*parts)
        raise UnknownComponentName(f"{path}: unknown distribution {kind!r}")

    def generator(self, node, path):
        kind, params = _check_node(node, path)
        if kind != "sprite_generator":
            raise UnknownComponentName(f"{path}: unknown generator {kind!r}")
        count = params["count"]
        if isinstance(count, dict):
            count = self.distribution(count, f"{path}/count", key="count")
        return procgen.SpriteGenerator(
            count,
            self.distribution(params["factors"], f"{path}/factors"),
            disjoint=params.get("disjoint", False),
            max_rejections=params.get("max_rejections", 100),
        )

    # initializer -----------------------------------------------------------------

    def initializer(self):
        plans = []
        for i, layer in enumerate(self.doc["layers"]):
            fixed = [dict(f) for f in layer.get("sprites", [])]
            for factors in fixed:
                if "mass" in factors:
                    factors["mass"] = _float(factors["mass"])
            generator = None
            if "generator" in layer:
                generator = self.generator(layer["generator"], f"/layers/{i}/generator")
            plans.append((layer["name"], fixed, generator))

        def initialize(rng):
            state = sprites.State()
            placed = []
            for name, fixed, generator in plans:
                members = [sprites.make_sprite(f) for f in fixed]
                if generator is not None:
                    members.extend(generator.generate(rng, existing=placed))
                state.add_layer(name, members)
                placed.extend(members)
            return state

        return initialize

    # forces --------------------------------------------------------------------

    def force(self, node, path):
        kind, params = _check_node(node, path)
        if kind in ("drag", "friction", "constant_force"):
            layer_list = params["layers"]
            for layer in layer_list:
                _check_layer_ref(layer, self.layers, f"{path}/layers")
            if kind == "drag":
                return physics.Drag(params["coeff"], layer_list)
            if kind == "friction":
                return physics.Friction(params["coeff"], layer_list)
            return physics.ConstantForce(params["vector"], layer_list)
        if kind == "tether":
            for key in ("layer_a", "layer_b"):
                if params.get(key) is not None:
                    _check_layer_ref(params[key], self.layers, f"{path}/{key}")
            return physics.Tether(params.get("layer_a"), params.get("layer_b"),
                                  params.get("sprite_ids"),
                                  rest_length=params.get("rest_length", 0.0))
        if kind == "collision":
            pairs = [tuple(p) for p in params["layer_pairs"]]
            for a, b in pairs:
                _check_layer_ref(a, self.layers, f"{path}/layer_pairs")
                _check_layer_ref(b, self.layers, f"{path}/layer_pairs")
            return physics.Collision(pairs,
                                     elasticity=params.get("elasticity", 1.0),
                                     update_angular=params.get("update_angular", True))
        raise UnknownComponentName(f"{path}: unknown force {kind!r}")

    # tasks ------------------------------------------------------------------------

    def task(self, node, path):
        kind, params = _check_node(node, path)
        if kind == "contact_reward":
            self._pair_layers(params, path)
            return tasks.ContactReward(params["reward"], params["layer_a"], params["layer_b"],
                                       reset_steps_after_contact=params.get("reset_steps_after_contact"),
                                       per_pair=params.get("per_pair", False))
        if kind == "avoid_contact":
            self._pair_layers(params, path)
            return tasks.AvoidContact(params["penalty"], params["layer_a"], params["layer_b"],
                                      terminate_on_contact=params.get("terminate_on_contact", False))
        if kind == "timeout":
            return tasks.Timeout(params["max_steps"])
        if kind == "composite":
            return tasks.CompositeTask([self.task(sub, f"{path}/subtasks/{i}")
                                        for i, sub in enumerate(params["subtasks"])])
        raise UnknownComponentName(f"{path}: unknown task {kind!r}")

    def _pair_layers(self, params, path):
        _check_layer_ref(params["layer_a"], self.layers, f"{path}/layer_a")
        _check_layer_ref(params["layer_b"], self.layers, f"{path}/layer_b")

    # action spaces -------------------------------------------------------------------

    def action_space(self, node, path):
        kind, params = _check_node(node, path)
        if kind in ("joystick", "grid", "set_position", "click"):
            _check_layer_ref(params["layer"], self.layers, f"{path}/layer")
        if kind == "joystick":
            return action_spaces.Joystick(params["scaling"], params["layer"],
                                          velocity_mode=params.get("velocity_mode", False))
        if kind == "grid":
            return action_spaces.Grid(params["step_size"], params["layer"])
        if kind == "set_position":
            return action_spaces.SetPosition(params["layer"])
        if kind == "click":
            return action_spaces.Click(params["layer"],
                                       motion_scale=params.get("motion_scale", 0.02))
        if kind == "composite":
            return action_spaces.Composite(
                {name: self.action_space(sub, f"{path}/parts/{name}")
                 for name, sub in params["parts"].items()})
        raise UnknownComponentName(f"{path}: unknown action space {kind!r}")

    # observers ---------------------------------------------------------------------------

    def observer(self, node, path):
        kind, params = _check_node(node, path)
        if kind == "image":
            return observers.ImageObserver(params.get("width", 256), params.get("height", 256),
                                           supersample=params.get("supersample", 1))
        if kind == "features":
            return observers.FeatureObserver(params.get("fields", ("x", "y")),
                                             max_sprites=params.get("max_sprites", 16),
                                             pad=params.get("pad", -1.0))
        raise UnknownComponentName(f"{path}: unknown observer {kind!r}")

    # rules ----------------------------------------------------------------------------------

    def predicate(self, node, path):
        kind, params = _check_node(node, path)
        if kind == "always":
            return lambda state: True
        if kind == "layer_empty":
            _check_layer_ref(params["layer"], self.layers, f"{path}/layer")
            return lambda state, _l=params["layer"]: state.count(_l) == 0
        if kind == "layer_count_below":
            _check_layer_ref(params["layer"], self.layers, f"{path}/layer")
            threshold = params["threshold"]
            return lambda state, _l=params["layer"]: state.count(_l) < threshold
        raise UnknownComponentName(f"{path}: unknown predicate {kind!r}")

    def rule(self, node, path):
        kind, params = _check_node(node, path)
        if kind == "vanish_on_contact":
            _check_layer_ref(params["predator_layer"], self.layers, f"{path}/predator_layer")
            _check_layer_ref(params["prey_layer"], self.layers, f"{path}/prey_layer")
            return rules.VanishOnContact(params["predator_layer"], params["prey_layer"])
        if kind == "modify_on_contact":
            self._pair_layers(params, path)
            return rules.ModifyOnContact(params["layer_a"], params["layer_b"],
                                         params["assignments"])
        if kind == "conditional_create":
            _check_layer_ref(params["layer"], self.layers, f"{path}/layer")
            factors = self.distribution(params["factors"], f"{path}/factors")
            factory = lambda rng, _f=factors: sprites.make_sprite(_f.sample(rng))
            return rules.ConditionalCreate(self.predicate(params["when"], f"{path}/when"),
                                           factory, params["layer"], params["max_count"])
        if kind == "timed":
            return rules.TimedRule(params["start_step"], params.get("end_step"),
                                   self.rule(params["rule"], f"{path}/rule"))
        if kind == "random_drift":
            _check_layer_ref(params["layer"], self.layers, f"{path}/layer")
            return rules.RandomDrift(params["layer"], params["speed"],
                                     turn_prob=params.get("turn_prob", 0.1),
                                     max_turn=params.get("max_turn", np.pi))
        if kind == "phase_sequence":
            phases = []
            for i, phase in enumerate(params["phases"]):
                for layer in phase.get("frozen_layers", ()):
                    _check_layer_ref(layer, self.layers, f"{path}/phases/{i}/frozen_layers")
                phases.append(rules.Phase(
                    phase["name"],
                    duration=phase.get("duration"),
                    rules=[self.rule(sub, f"{path}/phases/{i}/rules/{j}")
                           for j, sub in enumerate(phase.get("rules", []))],
                    task=(self.task(phase["task"], f"{path}/phases/{i}/task")
                          if "task" in phase else None),
                    frozen_layers=phase.get("frozen_layers", ()),
                ))
            return rules.PhaseSequence(phases)
        raise UnknownComponentName(f"{path}: unknown rule {kind!r}")

    # whole environment ------------------------------------------------------------------------

    def build_components(self, np_seed=None):
        doc = self.doc
        built_observers = {name: self.observer(node, f"/observers/{name}")
                           for name, node in doc["observers"].items()}
        return {
            "state_initializer": self.initializer(),
            "forces": [self.force(node, f"/forces/{i}")
                       for i, node in enumerate(doc.get("forces", []))],
            "task": self.task(doc["task"], "/task"),
            "action_space": self.action_space(doc["action_space"], "/action_space"),
            "observers": built_observers,
            "rules": [self.rule(node, f"/rules/{i}")
                      for i, node in enumerate(doc.get("rules", []))],
        }


def build(source, seed=None):
    """Wire a recipe (builtin name, path, text or document) into a fresh
    Environment; `seed` overrides the recipe's default seed."""
    recipe = load(source)
    doc = recipe.document
    overrides = doc.get("physics", {})
    declared = {layer["name"] for layer in doc["layers"]}
    parts = _Builder(doc, declared).build_components()
    return Environment(
        seed=seed if seed is not None else recipe.seed,
        passes=overrides.get("passes", physics.DEFAULT_PASSES),
        correction=overrides.get("correction", physics.DEFAULT_CORRECTION),
        meta={"recipe": recipe.name, "recipe_digest": recipe.digest()},
        **parts,
    )

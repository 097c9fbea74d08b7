import math

import numpy as np
import pytest

from polyarena import geometry
from polyarena.errors import InvariantViolation, UnknownLayer, UnknownShapeName
from polyarena.sprites import DEFAULTS, Sprite, State, make_sprite


def test_paper_goal_sprite():
    goal = make_sprite(x=0.1, y=0.1, shape="square", scale=0.1, c0=255)
    assert goal.position == pytest.approx((0.1, 0.1))
    assert goal.color == (255, 0, 0)
    assert goal.scale == 0.1
    verts = goal.world_vertices()
    assert verts.min(axis=0) == pytest.approx((0.05, 0.05))
    assert verts.max(axis=0) == pytest.approx((0.15, 0.15))


def test_paper_agent_sprite():
    agent = make_sprite(x=0.5, y=0.5, shape="circle", scale=0.1, c1=255)
    assert agent.position == pytest.approx((0.5, 0.5))
    assert agent.color == (0, 255, 0)
    assert len(agent.shape.vertices) == 24


def test_default_sprite():
    sprite = make_sprite()
    assert sprite.position == pytest.approx((0.5, 0.5))
    assert sprite.scale == 0.1
    assert sprite.velocity == pytest.approx((0.0, 0.0))
    assert sprite.angular_velocity == 0.0
    assert sprite.mass == 1.0
    assert sprite.color == (0, 0, 0)
    assert sprite.opacity == 255
    assert sprite.shape is geometry.SHAPES["square"]


def test_make_sprite_deterministic():
    factors = {"x": 0.3, "y": 0.7, "shape": "pentagon", "scale": 0.2, "c2": 9}
    a, b = make_sprite(factors), make_sprite(factors)
    assert np.array_equal(a.position, b.position)
    assert a.color == b.color and a.scale == b.scale
    assert np.array_equal(a.shape.vertices, b.shape.vertices)


def test_make_sprite_errors():
    with pytest.raises(UnknownShapeName):
        make_sprite(shape="heptagram")
    with pytest.raises(InvariantViolation, match="scale"):
        make_sprite(scale=0.0)
    with pytest.raises(InvariantViolation, match="mass"):
        make_sprite(mass=-2)
    with pytest.raises(InvariantViolation, match="c1"):
        make_sprite(c1=300)
    with pytest.raises(InvariantViolation, match="opacity"):
        make_sprite(opacity=-1)
    with pytest.raises(InvariantViolation, match="position"):
        make_sprite(x=float("nan"))
    with pytest.raises(InvariantViolation):
        make_sprite(bogus_factor=1)


def test_explicit_vertices_and_infinite_mass():
    wall = make_sprite(vertices=[(-0.5, -0.05), (0.5, -0.05), (0.5, 0.05), (-0.5, 0.05)],
                       mass=float("inf"), scale=1.0)
    assert wall.inv_mass == 0.0
    assert wall.inv_inertia == 0.0
    assert math.isinf(wall.inertia)


def test_world_vertices_periodicity():
    sprite = make_sprite(shape="pentagon", angle=0.4)
    before = sprite.world_vertices().copy()
    sprite.angle += 2 * math.pi
    assert np.abs(sprite.world_vertices() - before).max() < 1e-9


def test_sprite_contains():
    sprite = make_sprite(x=0.1, y=0.1, shape="square", scale=0.1)
    assert sprite.contains(sprite.position)
    assert sprite.contains((0.149, 0.149))
    assert not sprite.contains((0.149 + 1.0, 0.149))


def test_world_cache_tracks_pose():
    sprite = make_sprite(x=0.2, y=0.2)
    first = sprite.world_vertices()
    assert sprite.world_vertices() is first  # cached while pose unchanged
    sprite.position = sprite.position + (0.1, 0.0)
    assert np.allclose(sprite.world_vertices(), first + (0.1, 0.0))


def test_z_order():
    goal, agent = make_sprite(c0=255), make_sprite(c1=255)
    state = State([("goal", [goal]), ("agent", [agent])])
    assert state.z_order() == [goal, agent]

    assert State().z_order() == []

    s1, s2, s3 = (make_sprite() for _ in range(3))
    assert State([("one", [s1, s2, s3])]).z_order() == [s1, s2, s3]


def test_state_assigns_ids_in_insertion_order():
    state = State([("a", [make_sprite(), make_sprite()]), ("b", [make_sprite()])])
    assert [s.id for s in state.z_order()] == [1, 2, 3]
    state.mutate_layer("b", add=[make_sprite()])
    assert [s.id for s in state.sprites("b")] == [3, 4]


def test_mutate_layer():
    state = State([("pellets", [make_sprite(x=0.1 * i) for i in range(1, 6)]),
                   ("empty", [])])
    before = state.sprites("pellets")

    state.mutate_layer("pellets", remove=lambda s: False)
    assert state.sprites("pellets") == before

    state.mutate_layer("empty", add=[make_sprite()])
    assert state.count("empty") == 1

    with pytest.raises(UnknownLayer):
        state.mutate_layer("nope", add=[])


def test_mutate_layer_removes_contacted_pellets():
    # Agent square overlaps exactly the pellets whose centers fall inside it.
    agent = make_sprite(x=0.5, y=0.5, scale=0.3)
    pellets = [make_sprite(x=x, y=0.5, scale=0.05)
               for x in (0.1, 0.45, 0.55, 0.8, 0.9)]
    state = State([("agent", [agent]), ("pellets", pellets)])

    touched = {
        p.id for p in pellets
        if geometry.detect_contact(agent.world_vertices(), p.world_vertices())
    }
    assert len(touched) == 2  # oracle: only the two central pellets overlap

    survivors = [p for p in pellets if p.id not in touched]
    state.mutate_layer("pellets", remove=lambda s: s.id in touched)
    assert state.sprites("pellets") == survivors


def test_state_validates_at_insertion():
    sprite = make_sprite()
    sprite.scale = -1.0  # corrupt after construction
    state = State([("layer", [])])
    with pytest.raises(InvariantViolation, match="scale"):
        state.mutate_layer("layer", add=[sprite])


def test_duplicate_layer_rejected():
    state = State([("a", [])])
    with pytest.raises(InvariantViolation):
        state.add_layer("a")


def test_metadata_bag():
    sprite = make_sprite(metadata={"is_ghost": True})
    assert sprite.metadata["is_ghost"] is True
    sprite.metadata["hits"] = 3
    assert make_sprite().metadata == {}


def test_defaults_are_complete():
    assert set(DEFAULTS) == {"x", "y", "shape", "angle", "scale", "x_vel", "y_vel",
                             "angular_vel", "mass", "c0", "c1", "c2", "opacity"}

import numpy as np
import pytest

from polyarena.errors import CapacityExceeded
from polyarena.observers import (Drawable, FeatureObserver, ImageObserver,
                                 display_list, encode_png, rasterize)
from polyarena.sprites import State, make_sprite


def nav_state():
    return State([
        ("goal", [make_sprite(x=0.1, y=0.1, shape="square", scale=0.1, c0=255)]),
        ("agent", [make_sprite(x=0.5, y=0.5, shape="circle", scale=0.1, c1=255)]),
    ])


# --- display list ------------------------------------------------------------

def test_display_list_order_and_colors():
    drawables = display_list(nav_state())
    assert len(drawables) == 2
    assert drawables[0].color == (255, 0, 0)   # goal drawn first (behind)
    assert drawables[1].color == (0, 255, 0)

    assert display_list(State()) == []

    three = State([("a", [make_sprite()]), ("b", [make_sprite()]),
                   ("c", [make_sprite()])])
    assert len(display_list(three)) == 3


# --- rasterizer -------------------------------------------------------------------

def test_empty_state_renders_black():
    image = rasterize(State(), 16, 16)
    assert image.shape == (16, 16, 3)
    assert image.sum() == 0


def test_paper_goal_sprite_pixel_area():
    state = State([("goal", [make_sprite(x=0.1, y=0.1, shape="square",
                                         scale=0.1, c0=255)])])
    image = rasterize(state, 256, 256)
    red = (image[:, :, 0] == 255) & (image[:, :, 1] == 0)
    count = int(red.sum())
    expected = (0.1 * 256) ** 2
    assert abs(count - expected) <= 0.05 * expected

    rows, cols = np.nonzero(red)
    assert 12 <= cols.min() <= 14 and 36 <= cols.max() <= 39
    assert 216 <= rows.min() <= 219 and 241 <= rows.max() <= 244  # y flipped


def test_zorder_overdraw():
    below = make_sprite(x=0.5, y=0.5, scale=0.3, c0=255)
    above = make_sprite(x=0.55, y=0.5, scale=0.3, c1=255)
    image = rasterize(State([("lo", [below]), ("hi", [above])]), 64, 64)
    # Overlap pixels take the later (green) sprite's color.
    green = (image[:, :, 1] == 255)
    red = (image[:, :, 0] == 255)
    assert green.sum() > 0 and red.sum() > 0
    assert not (green & red).any()
    center_col = int(0.55 * 64)
    assert image[32, center_col, 1] == 255


def test_render_deterministic_and_png_stable():
    state = nav_state()
    a = rasterize(state, 128, 128)
    b = rasterize(state, 128, 128)
    assert np.array_equal(a, b)
    assert encode_png(a) == encode_png(b)


def test_one_pixel_translation_shifts_columns():
    def filled_cols(x):
        state = State([("s", [make_sprite(x=x, y=0.5, shape="square", scale=0.2)])])
        image = rasterize(state, 256, 256)
        return np.nonzero(image.sum(axis=(0, 2)))[0]

    base = filled_cols(0.5)
    shifted = filled_cols(0.5 + 1.0 / 256)
    assert np.array_equal(shifted, base + 1)


def test_fill_area_error_within_perimeter_bound():
    for scale in (0.1, 0.25, 0.5):
        state = State([("s", [make_sprite(x=0.5, y=0.5, shape="square",
                                          scale=scale, c2=255)])])
        width = height = 128
        image = rasterize(state, width, height)
        filled = (image[:, :, 2] == 255).sum()
        expected = (scale * width) * (scale * height)
        perimeter_px = 4 * scale * width
        assert abs(filled - expected) <= perimeter_px


def test_supersample_averages_edges():
    state = State([("s", [make_sprite(x=0.5, y=0.5, shape="circle",
                                      scale=0.4, c0=255)])])
    flat = rasterize(state, 32, 32, supersample=1)
    smooth = rasterize(state, 32, 32, supersample=4)
    values = np.unique(smooth[:, :, 0])
    assert set(np.unique(flat[:, :, 0])) == {0, 255}
    assert len(values) > 2  # intermediate edge shades exist
    assert smooth.shape == flat.shape


def test_opacity_blending():
    solid = make_sprite(x=0.5, y=0.5, scale=0.5, c0=200)
    veil = make_sprite(x=0.5, y=0.5, scale=0.5, c2=100, opacity=128)
    image = rasterize(State([("a", [solid]), ("b", [veil])]), 32, 32)
    center = image[16, 16]
    assert center[0] == round(200 * (1 - 128 / 255))
    assert center[2] == round(100 * 128 / 255)


def test_rasterize_validation():
    with pytest.raises(ValueError):
        rasterize(State(), 0, 16)
    with pytest.raises(ValueError):
        rasterize(State(), 16, 16, supersample=3)


def test_image_observer_spec():
    obs = ImageObserver(64, 48)
    assert obs.spec() == {"shape": (48, 64, 3), "dtype": "uint8"}
    assert obs(nav_state()).shape == (48, 64, 3)


# --- feature observer -----------------------------------------------------------------

def test_features_paper_positions():
    obs = FeatureObserver(fields=("x", "y"), max_sprites=4, pad=-1.0)
    vec = obs(nav_state())
    assert vec[:4] == pytest.approx([0.1, 0.1, 0.5, 0.5])
    assert (vec[4:] == -1.0).all()


def test_features_empty_state_is_all_pad():
    obs = FeatureObserver(fields=("x", "y"), max_sprites=3, pad=-1.0)
    assert (obs(State()) == -1.0).all()


def test_features_pad_distinguishable():
    obs = FeatureObserver(fields=("x", "y"), max_sprites=2, pad=-1.0)
    vec = obs(State([("a", [make_sprite(x=0.0, y=1.0)])]))
    assert vec[0] == 0.0 and vec[1] == 1.0
    assert (vec[2:] == -1.0).all()
    assert obs.pad < 0.0  # outside any arena coordinate


def test_features_capacity():
    obs = FeatureObserver(fields=("x",), max_sprites=1)
    with pytest.raises(CapacityExceeded):
        obs(State([("a", [make_sprite(), make_sprite()])]))
    with pytest.raises(ValueError):
        FeatureObserver(fields=("warp",))


def test_drawable_is_plain_record():
    d = Drawable(np.zeros((3, 2)), (1, 2, 3), 255)
    assert d.color == (1, 2, 3) and d.opacity == 255

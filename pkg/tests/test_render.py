import json

import numpy as np
import pytest

from snmap.core import Frame
from snmap.exceptions import InputError
from snmap.render import (
    MOVIE_KINDS,
    ColorMapSpec,
    MovieSpec,
    decode_movie,
    encode_movie,
    height_field_json,
    height_field_payload,
    overlay_check,
    render_heatmap,
    upscale,
)


# -- color formulas ------------------------------------------------------------


def test_diverging_endpoints_are_frozen():
    v = np.array([[0.0, 2.0, -2.0, 1.0]])
    img = render_heatmap(v, ColorMapSpec("diverging", -2.0, 2.0))
    assert img[0, 0].tolist() == [255, 255, 255]  # zero is white
    assert img[0, 1].tolist() == [0, 0, 255]      # full positive is blue
    assert img[0, 2].tolist() == [255, 0, 0]      # full negative is red
    ramp = round(255 * (1 - 0.5))
    assert img[0, 3].tolist() == [ramp, ramp, 255]


def test_diverging_negation_swaps_red_and_blue():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(7, 9))
    a = render_heatmap(v, ColorMapSpec("diverging"))
    b = render_heatmap(-v, ColorMapSpec("diverging"))
    assert np.array_equal(a[..., 0], b[..., 2])
    assert np.array_equal(a[..., 2], b[..., 0])
    assert np.array_equal(a[..., 1], b[..., 1])


def test_diverging_auto_range_is_symmetric():
    v = np.array([[3.0, -1.0]])
    img = render_heatmap(v, ColorMapSpec("diverging"))
    assert img[0, 0].tolist() == [0, 0, 255]  # 3 saturates at max |v|
    ramp = round(255 * (1 - 1.0 / 3.0))
    assert img[0, 1].tolist() == [255, ramp, ramp]


def test_sequential_formula():
    v = np.array([[0.0, 1.0, 0.25]])
    img = render_heatmap(v, ColorMapSpec("sequential", 0.0, 1.0))
    assert img[0, 0].tolist() == [255, 255, 255]
    assert img[0, 1].tolist() == [0, 0, 0]
    g = round(255 * (1 - 0.25))
    assert img[0, 2].tolist() == [g, g, g]
    clipped = render_heatmap(np.array([[-5.0, 9.0]]), ColorMapSpec("sequential", 0.0, 1.0))
    assert clipped[0, 0].tolist() == [255, 255, 255]
    assert clipped[0, 1].tolist() == [0, 0, 0]


def test_overlay_paints_significant_solid_red():
    v = np.array([[0.2, 0.8], [0.5, 0.0]])
    sig = np.array([[False, True], [True, False]])
    img = render_heatmap(v, ColorMapSpec("overlay", 0.0, 1.0), significant=sig)
    assert img[0, 1].tolist() == [255, 0, 0]
    assert img[1, 0].tolist() == [255, 0, 0]
    g = round(255 * (1 - 0.2))
    assert img[0, 0].tolist() == [g, g, g]


def test_render_input_errors():
    with pytest.raises(InputError):
        render_heatmap(np.zeros((2, 2)), ColorMapSpec("sequential", 1.0, 1.0))
    with pytest.raises(InputError):
        render_heatmap(np.zeros((2, 2)), ColorMapSpec("overlay", 0.0, 1.0))


def test_constant_field_renders_without_dividing_by_zero():
    img = render_heatmap(np.full((3, 3), 2.0), ColorMapSpec("sequential"))
    assert img.shape == (3, 3, 3)
    img = render_heatmap(np.zeros((3, 3)), ColorMapSpec("diverging"))
    assert (img == 255).all()


def test_upscale_repeats_pixels():
    img = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)
    big = upscale(img, 3)
    assert big.shape == (6, 6, 3)
    assert np.array_equal(big[0:3, 0:3], np.broadcast_to(img[0, 0], (3, 3, 3)))
    assert upscale(img, 1) is img
    with pytest.raises(InputError):
        upscale(img, 0)


def test_overlay_check_identical_frames_are_yellow():
    f = Frame([[1.0, 0.5], [0.0, 1.0]])
    img = overlay_check(f, f)
    assert np.array_equal(img[..., 0], img[..., 1])
    assert (img[..., 2] == 0).all()
    assert img[0, 0].tolist() == [255, 255, 0]


def test_overlay_check_shows_misalignment_fringes():
    a = np.zeros((4, 4))
    a[1, 1] = 1.0
    b = np.zeros((4, 4))
    b[2, 2] = 1.0
    img = overlay_check(Frame(a), Frame(b))
    assert img[1, 1].tolist() == [255, 0, 0]
    assert img[2, 2].tolist() == [0, 255, 0]
    with pytest.raises(InputError):
        overlay_check(Frame(a), Frame(np.zeros((3, 3))))


# -- movies ---------------------------------------------------------------------


def gradient_frames(n=4, shape=(6, 8)):
    out = []
    for k in range(n):
        g = np.full(shape + (3,), 40 * k, np.uint8)
        g[..., 2] = 255 - 40 * k
        out.append(g)
    return out


def test_movie_kinds_cover_all_stages():
    assert MOVIE_KINDS == ("O1", "O2", "R1", "R2", "D", "S", "T", "P")


def test_encode_decode_round_trip_small_palette(tmp_path):
    frames = gradient_frames()
    spec = MovieSpec(kind="D", scale=2, frame_delay_ms=80)
    info = encode_movie(tmp_path / "d.gif", frames, spec)
    back = decode_movie(tmp_path / "d.gif")
    assert len(back) == 4
    for orig, dec in zip(frames, back):
        assert np.array_equal(dec, upscale(orig, 2))
    assert info["frame_count"] == 4
    assert info["frame_delay_ms"] == 80
    assert info["kind"] == "D"


def test_reencoding_decoded_frames_is_lossless(tmp_path):
    rng = np.random.default_rng(1)
    frames = [rng.integers(0, 256, (5, 5, 3)).astype(np.uint8) for _ in range(3)]
    first = tmp_path / "a.gif"
    second = tmp_path / "b.gif"
    encode_movie(first, frames, MovieSpec(kind="T", scale=1))
    once = decode_movie(first)
    encode_movie(second, once, MovieSpec(kind="T", scale=1))
    twice = decode_movie(second)
    for a, b in zip(once, twice):
        assert np.array_equal(a, b)


def test_png_siblings_hold_exact_frames(tmp_path):
    from PIL import Image

    frames = gradient_frames(n=3)
    info = encode_movie(tmp_path / "p.gif", frames, MovieSpec(kind="P", scale=2))
    assert len(info["frames"]) == 3
    for k, png in enumerate(info["frames"]):
        assert png.endswith(f"p_frames/frame_{k:04d}.png")
        with Image.open(png) as im:
            assert np.array_equal(np.asarray(im.convert("RGB")),
                                  upscale(frames[k], 2))


def test_empty_movie_rejected(tmp_path):
    with pytest.raises(InputError):
        encode_movie(tmp_path / "x.gif", [], MovieSpec(kind="D"))


def test_many_color_movie_stays_close(tmp_path):
    rng = np.random.default_rng(2)
    frames = [rng.integers(0, 256, (16, 16, 3)).astype(np.uint8) for _ in range(2)]
    encode_movie(tmp_path / "big.gif", frames, MovieSpec(kind="O1", scale=1))
    back = decode_movie(tmp_path / "big.gif")
    for orig, dec in zip(frames, back):
        err = np.abs(orig.astype(int) - dec.astype(int)).mean()
        assert err < 48  # palettized, but still recognizable


# -- height fields ------------------------------------------------------------------


def test_height_field_payload_layout():
    v = np.array([[1.0, 2.0], [3.0, 4.0]])
    payload = height_field_payload(v)
    assert payload == {
        "rows": 2,
        "cols": 2,
        "values": [1.0, 2.0, 3.0, 4.0],
        "range": [1.0, 4.0],
    }


def test_height_field_json_round_trips(tmp_path):
    v = np.random.default_rng(3).normal(size=(4, 5))
    path = tmp_path / "h.json"
    payload = height_field_json(path, v)
    loaded = json.loads(path.read_text())
    assert loaded == payload
    assert np.allclose(np.array(loaded["values"]).reshape(4, 5), v)

import numpy as np
import pytest
from PIL import Image

from sheartext.frames import (
    DecodeError,
    Rect,
    UnsupportedFormatError,
    draw_boxes,
    load_frame,
    pseudo_color,
    read_rects,
    resize_bilinear,
    resize_to_working,
    scale_rect,
    to_grayscale,
    write_annotated,
    write_rects,
)


def bilinear_oracle(img, out_h, out_w):
    """Direct per-pixel bilinear sampling: half-pixel centers, edge clamp."""
    in_h, in_w = img.shape
    out = np.zeros((out_h, out_w))
    for oy in range(out_h):
        for ox in range(out_w):
            sy = min(max((oy + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1.0)
            sx = min(max((ox + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1.0)
            y0 = min(int(np.floor(sy)), in_h - 2) if in_h > 1 else 0
            x0 = min(int(np.floor(sx)), in_w - 2) if in_w > 1 else 0
            fy = sy - y0
            fx = sx - x0
            top = img[y0, x0] * (1 - fx) + img[y0, min(x0 + 1, in_w - 1)] * fx
            bot = img[min(y0 + 1, in_h - 1), x0] * (1 - fx) + img[
                min(y0 + 1, in_h - 1), min(x0 + 1, in_w - 1)
            ] * fx
            out[oy, ox] = top * (1 - fy) + bot * fy
    return out


class TestLoadFrame:
    def test_decodes_white_png(self, tmp_path):
        path = tmp_path / "white.png"
        Image.new("RGB", (2, 2), (255, 255, 255)).save(path)
        img = load_frame(str(path))
        assert img.shape == (2, 2, 3)
        assert img.dtype == np.uint8
        assert (img == 255).all()

    def test_preserves_channel_order(self, tmp_path):
        path = tmp_path / "rgb.png"
        Image.new("RGB", (1, 1), (10, 20, 30)).save(path)
        assert load_frame(str(path)).tolist() == [[[10, 20, 30]]]

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_frame(str(tmp_path / "nope.png"))

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "broken.png"
        full = tmp_path / "full.png"
        Image.new("RGB", (64, 64), (1, 2, 3)).save(full)
        path.write_bytes(full.read_bytes()[:40])
        with pytest.raises(DecodeError):
            load_frame(str(path))

    def test_unsupported_format(self, tmp_path):
        path = tmp_path / "anim.gif"
        Image.new("RGB", (2, 2)).save(path, format="GIF")
        with pytest.raises(UnsupportedFormatError):
            load_frame(str(path))

    def test_bmp_and_jpeg_accepted(self, tmp_path):
        for fmt, name in (("BMP", "a.bmp"), ("JPEG", "a.jpg")):
            path = tmp_path / name
            Image.new("RGB", (4, 4), (100, 100, 100)).save(path, format=fmt)
            assert load_frame(str(path)).shape == (4, 4, 3)


class TestGrayscale:
    def test_white_and_black(self):
        img = np.array([[[255, 255, 255], [0, 0, 0]]], dtype=np.uint8)
        assert to_grayscale(img).tolist() == [[255.0, 0.0]]

    def test_pure_red(self):
        img = np.array([[[255, 0, 0]]], dtype=np.uint8)
        assert to_grayscale(img)[0, 0] == pytest.approx(76.245, abs=1e-12)

    def test_gray_inputs_are_fixed_points(self):
        v = np.arange(256, dtype=np.uint8)
        img = np.stack([v, v, v], axis=-1)[None]
        out = to_grayscale(img)
        assert np.array_equal(out[0], v.astype(np.float64))


class TestResize:
    def test_identity_at_working_size(self, rng):
        img = rng.uniform(0, 255, (256, 256))
        assert np.array_equal(resize_to_working(img), img)

    def test_constant_stays_constant(self):
        img = np.full((360, 640), 77.5)
        out = resize_to_working(img)
        assert out.shape == (256, 256)
        assert np.allclose(out, 77.5, atol=1e-9)

    def test_matches_bilinear_oracle_on_checkerboard(self):
        yy, xx = np.mgrid[0:512, 0:512]
        board = (((yy // 32) + (xx // 32)) % 2).astype(np.float64) * 255.0
        got = resize_to_working(board)
        want = bilinear_oracle(board, 256, 256)
        assert np.abs(got - want).max() < 1e-9

    def test_matches_oracle_on_odd_shapes(self, rng):
        img = rng.uniform(-5, 5, (37, 61))
        got = resize_bilinear(img, 17, 23)
        want = bilinear_oracle(img, 17, 23)
        assert np.abs(got - want).max() < 1e-9

    def test_preserves_value_range(self, rng):
        for _ in range(5):
            img = rng.uniform(-100, 100, (123, 87))
            out = resize_bilinear(img, 64, 64)
            assert out.min() >= img.min() - 1e-9
            assert out.max() <= img.max() + 1e-9


class TestPseudoColor:
    def test_extremes(self, rng):
        img = rng.uniform(0, 1, (16, 16))
        img[3, 4] = -2.0
        img[8, 9] = 2.0
        out = pseudo_color(img)
        assert out[3, 4].tolist() == [0, 0, 255]
        assert out[8, 9].tolist() == [255, 0, 0]

    def test_constant_is_all_blue(self):
        out = pseudo_color(np.full((4, 4), 3.25))
        assert (out == np.array([0, 0, 255], dtype=np.uint8)).all()

    def test_monotone_in_value(self, rng):
        img = rng.normal(size=(32, 32))
        out = pseudo_color(img).astype(int)
        bins = out[..., 0]  # red channel == bin index
        order = np.argsort(img.ravel())
        assert (np.diff(bins.ravel()[order]) >= 0).all()


def annotate_oracle(img, boxes, color, thickness):
    out = np.array(img, copy=True)
    for r in boxes:
        for y in range(r.y, r.y + r.h):
            for x in range(r.x, r.x + r.w):
                on_border = (
                    y < r.y + thickness
                    or y >= r.y + r.h - thickness
                    or x < r.x + thickness
                    or x >= r.x + r.w - thickness
                )
                if on_border:
                    out[y, x] = color
    return out


class TestAnnotate:
    def test_empty_box_list_is_identity(self, rng, tmp_path):
        img = rng.integers(0, 255, (20, 30, 3)).astype(np.uint8)
        path = tmp_path / "plain.png"
        write_annotated(img, [], str(path))
        assert np.array_equal(np.asarray(Image.open(path)), img)

    def test_full_frame_box_recolors_border_only(self, rng):
        img = rng.integers(0, 200, (16, 16, 3)).astype(np.uint8)
        out = draw_boxes(img, [Rect(0, 0, 16, 16)])
        assert np.array_equal(out[2:14, 2:14], img[2:14, 2:14])
        assert (out[0:2] == (0, 255, 0)).all()
        assert (out[:, -2:] == (0, 255, 0)).all()

    def test_overlapping_boxes_match_reference_rasterization(self, rng):
        img = rng.integers(0, 255, (40, 50, 3)).astype(np.uint8)
        boxes = [Rect(5, 5, 20, 15), Rect(15, 10, 25, 20)]
        got = draw_boxes(img, boxes)
        want = annotate_oracle(img, boxes, (0, 255, 0), 2)
        assert np.array_equal(got, want)


class TestRectFiles:
    def test_round_trip(self, tmp_path):
        rects = [Rect(0, 0, 5, 8), Rect(120, 7, 33, 14)]
        path = tmp_path / "boxes.txt"
        write_rects(rects, str(path))
        assert read_rects(str(path)) == rects

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "boxes.txt"
        path.write_text("# header\n\n1 2 3 4\n   # indented comment\n5 6 7 8\n")
        assert read_rects(str(path)) == [Rect(1, 2, 3, 4), Rect(5, 6, 7, 8)]

    def test_malformed_line_raises(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2 3\n")
        with pytest.raises(ValueError):
            read_rects(str(path))

    def test_nonpositive_extent_raises(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2 0 4\n")
        with pytest.raises(ValueError):
            read_rects(str(path))


class TestScaleRect:
    def test_identity_when_shapes_match(self):
        r = Rect(10, 20, 30, 40)
        assert scale_rect(r, 256, (256, 256)) == r

    def test_covers_and_stays_in_bounds(self):
        r = Rect(250, 250, 6, 6)
        out = scale_rect(r, 256, (360, 640))
        assert 0 <= out.x and out.x2 <= 640
        assert 0 <= out.y and out.y2 <= 360
        assert out.w > 0 and out.h > 0

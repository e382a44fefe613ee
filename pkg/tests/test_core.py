import numpy as np
import pytest

from snmap.core import Frame, PixelCoord, PolygonROI, RectROI, Sequence, validate_pair
from snmap.exceptions import InputError, ShapeMismatch


def test_frame_holds_values_immutably():
    f = Frame([[1.0, 2.0], [3.0, 4.0]])
    assert f.shape == (2, 2)
    with pytest.raises(ValueError):
        f.values[0, 0] = 9.0


def test_frame_copies_its_input():
    a = np.ones((2, 2))
    f = Frame(a)
    a[0, 0] = 5.0
    assert f.values[0, 0] == 1.0


def test_frame_rejects_bad_shapes_and_values():
    with pytest.raises(InputError):
        Frame(np.ones(4))
    with pytest.raises(InputError):
        Frame(np.ones((2, 0)))
    with pytest.raises(InputError):
        Frame([[np.nan, 1.0]])
    with pytest.raises(InputError):
        Frame([[np.inf, 1.0]])


def test_frame_single_pixel_allowed():
    assert Frame([[7.0]]).shape == (1, 1)


def test_sequence_requires_equal_shapes():
    with pytest.raises(ShapeMismatch):
        Sequence([Frame(np.ones((2, 2))), Frame(np.ones((3, 2)))])


def test_sequence_len_and_indexing():
    s = Sequence([Frame(np.full((2, 2), i)) for i in range(3)])
    assert len(s) == 3
    assert s[1].values[0, 0] == 1.0
    assert s.frame_shape == (2, 2)


def test_validate_pair_shape_mismatch():
    s1 = Sequence([Frame(np.ones((2, 2)))])
    s2 = Sequence([Frame(np.ones((2, 3)))])
    with pytest.raises(ShapeMismatch):
        validate_pair(s1, s2)


def test_validate_pair_truncates_with_warning():
    s1 = Sequence([Frame(np.ones((2, 2))) for _ in range(5)])
    s2 = Sequence([Frame(np.ones((2, 2))) for _ in range(3)])
    with pytest.warns(UserWarning):
        a, b = validate_pair(s1, s2)
    assert len(a) == len(b) == 3


def test_validate_pair_equal_lengths_no_warning(recwarn):
    s1 = Sequence([Frame(np.ones((2, 2))) for _ in range(3)])
    s2 = Sequence([Frame(np.ones((2, 2))) for _ in range(3)])
    a, b = validate_pair(s1, s2)
    assert len(a) == len(b) == 3
    assert not recwarn.list


def test_rect_roi_validation():
    RectROI(0, 0, 1, 1)
    with pytest.raises(InputError):
        RectROI(-1, 0, 2, 2)
    with pytest.raises(InputError):
        RectROI(0, 0, 0, 2)


def test_polygon_roi_coercion_and_minimum():
    p = PolygonROI([(0, 0), (0, 4), (4, 4)])
    assert all(isinstance(v, PixelCoord) for v in p.vertices)
    with pytest.raises(InputError):
        PolygonROI([(0, 0), (1, 1)])

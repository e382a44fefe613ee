import numpy as np
import pytest

from snmap.core import Frame, Sequence


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def blob_frame(rows=40, cols=48, cy=None, cx=None, ry=10, rx=14,
               fg=3.0, bg=1.0, noise=0.08, shift=0.0, rng=None):
    """Bright ellipse on a dim background; the standard synthetic scene."""
    rng = rng or np.random.default_rng(0)
    cy = (rows - 1) / 2 if cy is None else cy
    cx = (cols - 1) / 2 if cx is None else cx
    yy, xx = np.mgrid[0:rows, 0:cols]
    inside = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
    v = np.where(inside, fg + shift, bg) + rng.normal(0, noise, (rows, cols))
    return Frame(v)


def blob_sequence(n=12, seed=0, **kw):
    rng = np.random.default_rng(seed)
    return Sequence([blob_frame(rng=rng, **kw) for _ in range(n)])


def straddling_band(deg, rows=80, cols=100, half_h=20.0, value=2.0):
    """A thick band through the frame center at the given angle.

    Thick enough that every column's occupancy straddles the middle row,
    which is the regime the midline statistic is designed for.
    """
    th = np.deg2rad(deg)
    yy, xx = np.mgrid[0:rows, 0:cols]
    cy, cx = (rows - 1) / 2, (cols - 1) / 2
    yup = rows - 1 - yy
    d = -np.sin(th) * (xx - cx) + np.cos(th) * (yup - (rows - 1 - cy))
    return Frame(np.where(np.abs(d) <= half_h, value, 0.0))

"""Escape-time images of the quadratic family as binary PPM (P6).

Pixel values depend only on the arguments, so output bytes are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_SIDE = 8192
BOUNDED_COLOR = (0, 0, 0)


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        vals = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(np.isfinite(vals)):
            raise ValueError("rectangle bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle must have positive width and height")

    @classmethod
    def parse(cls, text: str) -> "Rect":
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 4:
            raise ValueError("rectangle needs four numbers: re_min,re_max,im_min,im_max")
        return cls(*parts)


def _grid(rect: Rect, width: int, height: int) -> np.ndarray:
    """Pixel centres, row 0 at the top."""
    re = rect.re_min + (np.arange(width) + 0.5) * ((rect.re_max - rect.re_min) / width)
    im = rect.im_max - (np.arange(height) + 0.5) * ((rect.im_max - rect.im_min) / height)
    return re[None, :] + 1j * im[:, None]


def escape_steps(z0: np.ndarray, c: np.ndarray, max_iter: int, bailout: np.ndarray) -> np.ndarray:
    """First n with |z_n| > bailout under z -> z**2 + c, or -1 if none within max_iter."""
    z = z0.astype(complex).copy()
    c = np.broadcast_to(c, z.shape).astype(complex)
    bailout = np.broadcast_to(bailout, z.shape)
    steps = np.full(z.shape, -1, dtype=np.int64)
    steps[np.abs(z) > bailout] = 0
    alive = steps < 0
    for n in range(1, max_iter + 1):
        if not alive.any():
            break
        z[alive] = z[alive] * z[alive] + c[alive]
        out = alive & (np.abs(z) > bailout)
        steps[out] = n
        alive &= ~out
    return steps


def palette(steps: np.ndarray) -> np.ndarray:
    """Escape step -> RGB bands; bounded points get BOUNDED_COLOR."""
    s = steps.astype(np.int64)
    rgb = np.stack([(40 + 9 * s) % 256, (90 + 5 * s) % 256, (200 + 3 * s) % 256], axis=-1)
    # keep escaped pixels visibly distinct from the bounded colour
    rgb = np.maximum(rgb, 16)
    rgb[s < 0] = BOUNDED_COLOR
    return rgb.astype(np.uint8)


def render(rect: Rect, width: int, height: int, mode: str = "parameter", c: complex = 0j,
           max_iter: int = 256) -> bytes:
    """PPM bytes for parameter space (pixel = c, orbit of 0) or for the
    dynamical plane of z**2 + c (pixel = starting point)."""
    if not (1 <= width <= MAX_SIDE and 1 <= height <= MAX_SIDE):
        raise ValueError(f"resolution must be between 1 and {MAX_SIDE} per side")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    grid = _grid(rect, width, height)
    if mode == "parameter":
        # |c| > 2 escapes at step 1, so bailout 2 is certified for every pixel
        steps = escape_steps(np.zeros_like(grid), grid, max_iter, np.float64(2.0))
    elif mode == "dynamical":
        steps = escape_steps(grid, np.complex128(c), max_iter, np.float64(max(2.0, abs(c))))
    else:
        raise ValueError(f"unknown render mode {mode!r}")
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + palette(steps).tobytes()

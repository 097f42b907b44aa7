"""Quasi-homogeneous dilations and the anisotropic distance ``|x|_a``.

For weights ``a_k >= 1`` the distance of ``x != 0`` is the unique ``t > 0``
with ``sum_k x_k**2 / t**(2 a_k) = 1``.  The root is bracketed by

    max_k |x_k|**(1/a_k)  <=  |x|_a  <=  sum_k |x_k|**(1/a_k)

and found by Newton's method in ``log t``.  The defining function is convex
and decreasing in ``log t`` so Newton started at the lower bracket climbs
monotonically onto the root and never leaves the bracket.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels

__all__ = [
    "Anisotropy",
    "aniso_dilate",
    "aniso_distance",
    "aniso_distance_many",
    "supporting_function_rect",
    "supporting_function_corners",
    "TINY",
]

#: below this sup-norm the distance is reported as exactly zero
TINY = 1e-300


@dataclass(frozen=True)
class Anisotropy:
    weights: tuple[float, ...]

    def __init__(self, weights: Sequence[float]):
        w = tuple(float(v) for v in np.atleast_1d(weights))
        if not w:
            raise ValueError("anisotropy needs at least one weight")
        for k, v in enumerate(w):
            if not (np.isfinite(v) and v >= 1):
                raise ValueError(f"weight a_{k + 1} = {v} must be finite and >= 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def isotropic(cls, ndim: int) -> "Anisotropy":
        return cls((1.0,) * ndim)

    @property
    def ndim(self) -> int:
        return len(self.weights)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.weights)

    @property
    def total(self) -> float:
        """``a_1 + ... + a_n``, the homogeneous dimension."""
        return float(sum(self.weights))

    def __iter__(self):
        return iter(self.weights)


def _as_aniso(a) -> Anisotropy:
    return a if isinstance(a, Anisotropy) else Anisotropy(a)


def aniso_dilate(t: float, a, x) -> np.ndarray:
    """``t**a x = (t**a_1 x_1, ..., t**a_n x_n)``."""
    a = _as_aniso(a)
    x = np.asarray(x, dtype=float)
    if t < 0:
        raise ValueError(f"dilation parameter must be >= 0, got {t}")
    if x.shape[-1] != a.ndim:
        raise ValueError(f"point has {x.shape[-1]} coordinates, anisotropy has {a.ndim}")
    return np.float_power(t, a.array) * x


def aniso_distance_many(points, a) -> np.ndarray:
    """Vectorised :func:`aniso_distance` over the rows of ``points``."""
    a = _as_aniso(a)
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[-1] != a.ndim:
        raise ValueError(f"points have {pts.shape[-1]} coordinates, anisotropy has {a.ndim}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("non-finite coordinates")
    return kernels.aniso_distance_many(pts.reshape(-1, a.ndim), a.array).reshape(pts.shape[:-1])


def aniso_distance(x, a) -> float:
    return float(aniso_distance_many(np.asarray(x, dtype=float)[None, :], a)[0])


def supporting_function_rect(R, y) -> float:
    """``H(y) = sup{y.xi : |xi_k| <= R_k} = sum_k R_k |y_k|``."""
    R = np.asarray(R, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(R <= 0):
        raise ValueError(f"rectangle half-widths must be positive, got {R}")
    if R.shape != y.shape:
        raise ValueError("R and y must have the same length")
    return float(np.sum(R * np.abs(y)))


def supporting_function_corners(R, y) -> float:
    """Brute force: maximum of ``y.xi`` over the ``2**n`` corners."""
    R = np.asarray(R, dtype=float)
    y = np.asarray(y, dtype=float)
    return max(
        float(np.dot(y, np.array(signs) * R))
        for signs in itertools.product((-1.0, 1.0), repeat=len(R))
    )

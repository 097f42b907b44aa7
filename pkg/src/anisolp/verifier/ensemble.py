"""Seeded ensembles of trigonometric polynomials.

Every trial draws from its own generator seeded by ``(seed, trial)`` so a
trial's field does not depend on how many other trials ran, or in which
order.
"""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

from ..anisotropy import Anisotropy
from ..grid import GridError, GridSpec, SampledField, field_from_centred, physical_frequencies
from ..littlewood_paley import LPFamily, build_family, decompose, lattice_distance, max_admissible_level

__all__ = [
    "KINDS",
    "SHAPES",
    "EnsembleSpec",
    "trial_rng",
    "support_mask",
    "generate",
    "generate_bands",
    "map_trials",
    "thread_count",
    "dilated_specs",
]

KINDS = ("random-rect", "dirichlet", "gaussian-bump", "lp-bands")
SHAPES = ("rect", "ball", "aniso-ball")

T = TypeVar("T")


@dataclass(frozen=True)
class EnsembleSpec:
    """What to sample.

    ``shape='rect'`` keeps modes with ``|xi_k| <= rect[k]``; ``'ball'``
    keeps ``|xi| <= radius``; ``'aniso-ball'`` keeps ``|xi|_a <= radius``.
    For ``kind='lp-bands'`` the ensemble holds band ``level`` of a random
    field drawn from the given support.
    """

    grid: GridSpec
    kind: str = "random-rect"
    rect: tuple[float, ...] | None = None
    count: int = 100
    seed: int = 0
    shape: str = "rect"
    radius: float | None = None
    aniso: Anisotropy | None = None
    level: int | None = None
    jmax: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}; expected one of {KINDS}")
        if self.shape not in SHAPES:
            raise ValueError(f"unknown support shape {self.shape!r}; expected one of {SHAPES}")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.rect is not None:
            object.__setattr__(self, "rect", tuple(float(r) for r in self.rect))
        if self.aniso is not None and not isinstance(self.aniso, Anisotropy):
            object.__setattr__(self, "aniso", Anisotropy(self.aniso))
        if self.shape == "rect":
            if self.rect is None or len(self.rect) != self.grid.ndim:
                raise ValueError("shape 'rect' needs one half-width per axis")
            for k, (r, nyq) in enumerate(zip(self.rect, self.grid.nyquist)):
                if r < 0 or r >= nyq:
                    raise GridError(f"axis {k + 1}: rectangle half-width {r} must lie in [0, Nyquist={nyq:g})")
        else:
            if self.radius is None or self.radius < 0:
                raise ValueError(f"shape {self.shape!r} needs a radius >= 0")
            if self.shape == "aniso-ball" and self.aniso is None:
                raise ValueError("shape 'aniso-ball' needs an anisotropy")
            # the ball's bounding box must sit strictly inside Nyquist
            w = self.aniso.weights if self.shape == "aniso-ball" else (1.0,) * self.grid.ndim
            for k, (a_k, nyq) in enumerate(zip(w, self.grid.nyquist)):
                if self.radius**a_k >= nyq:
                    raise GridError(f"axis {k + 1}: support radius exceeds Nyquist {nyq:g}")
        if self.kind == "lp-bands" and self.level is None:
            raise ValueError("kind 'lp-bands' needs a band level")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def support_mask(spec: EnsembleSpec) -> np.ndarray:
    """Boolean mask of active modes on the centred lattice."""
    grid = spec.grid
    mesh = np.meshgrid(*physical_frequencies(grid), indexing="ij")
    eps = 1e-9
    if spec.shape == "rect":
        mask = np.ones(grid.shape, dtype=bool)
        for xi, r in zip(mesh, spec.rect):
            mask &= np.abs(xi) <= r * (1 + eps) + eps
    elif spec.shape == "ball":
        rad = np.sqrt(sum(xi**2 for xi in mesh))
        mask = rad <= spec.radius * (1 + eps) + eps
    else:
        mask = lattice_distance(grid, spec.aniso) <= spec.radius * (1 + eps) + eps
    # k = -N/2 sits on Nyquist and is never admissible
    for axis, nk in enumerate(grid.samples):
        idx = [slice(None)] * grid.ndim
        idx[axis] = 0
        mask[tuple(idx)] = False
    return mask


def _translation(grid: GridSpec, shift: np.ndarray) -> np.ndarray:
    mesh = np.meshgrid(*physical_frequencies(grid), indexing="ij")
    phase = sum(xi * x0 for xi, x0 in zip(mesh, shift))
    return np.exp(-1j * phase)


def _index_widths(spec: EnsembleSpec, mask: np.ndarray) -> np.ndarray:
    """Per-axis largest active ``|k|`` (integer units)."""
    out = np.zeros(spec.grid.ndim)
    for k in range(spec.grid.ndim):
        other = tuple(ax for ax in range(spec.grid.ndim) if ax != k)
        on = mask.any(axis=other) if other else mask
        kk = np.arange(-spec.grid.samples[k] // 2, spec.grid.samples[k] // 2)
        out[k] = np.abs(kk[on]).max() if on.any() else 0
    return out


def _centred_coefficients(spec: EnsembleSpec, mask: np.ndarray, trial: int) -> np.ndarray:
    grid = spec.grid
    rng = trial_rng(spec.seed, trial)
    if spec.kind in ("random-rect", "lp-bands"):
        z = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        return np.where(mask, z / math.sqrt(2), 0)
    # deterministic profiles; trials other than 0 are translated copies
    if spec.kind == "dirichlet":
        coef = mask.astype(complex)
    else:
        # support edge at two standard deviations
        sigma = np.maximum(_index_widths(spec, mask), 1.0) / 2.0
        expo = np.zeros(grid.shape)
        for axis, nk in enumerate(grid.samples):
            k = np.arange(-nk // 2, nk // 2).reshape([-1 if a == axis else 1 for a in range(grid.ndim)])
            expo = expo + k**2 / (2 * sigma[axis] ** 2)
        coef = np.where(mask, np.exp(-expo), 0).astype(complex)
    if trial:
        shift = rng.uniform(0, 1, grid.ndim) * np.array(grid.periods)
        coef = coef * _translation(grid, shift)
    return coef


def _family_for(spec: EnsembleSpec) -> LPFamily:
    aniso = spec.aniso or Anisotropy.isotropic(spec.grid.ndim)
    jmax = spec.jmax if spec.jmax is not None else max_admissible_level(spec.grid, aniso)
    return build_family(spec.grid, aniso, jmax)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("MNL_THREADS", "1")))
    except ValueError:
        return 1


def map_trials(fn: Callable[[int], T], count: int, threads: int | None = None) -> list[T]:
    """``[fn(0), ..., fn(count-1)]``, optionally on a thread pool; the
    result order never depends on scheduling."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def generate(spec: EnsembleSpec, threads: int | None = None) -> list[SampledField]:
    mask = support_mask(spec)
    if spec.kind == "lp-bands":
        family = _family_for(spec)
        if not 0 <= spec.level <= family.jmax:
            raise ValueError(f"band level {spec.level} outside 0..{family.jmax}")
        return [bands[spec.level] for bands in generate_bands(spec, family, threads, mask)]

    def one(trial: int) -> SampledField:
        return field_from_centred(spec.grid, _centred_coefficients(spec, mask, trial))

    return map_trials(one, spec.count, threads)


def generate_bands(
    spec: EnsembleSpec,
    family: LPFamily | None = None,
    threads: int | None = None,
    mask: np.ndarray | None = None,
) -> list[list[SampledField]]:
    """Full Littlewood-Paley band lists of random fields from ``spec``."""
    family = family or _family_for(spec)
    mask = support_mask(spec) if mask is None else mask
    raw = EnsembleSpec(
        spec.grid, "random-rect", spec.rect, spec.count, spec.seed, spec.shape, spec.radius, spec.aniso
    )

    def one(trial: int) -> list[SampledField]:
        u = field_from_centred(spec.grid, _centred_coefficients(raw, mask, trial))
        return decompose(u, family)

    return map_trials(one, spec.count, threads)


def dilated_specs(base: EnsembleSpec, steps: Sequence[int]) -> list[EnsembleSpec]:
    """Copies of ``base`` whose support is dilated by ``2**m`` (anisotropically
    for aniso-balls and rectangles with an anisotropy)."""
    out = []
    for m in steps:
        t = 2.0**m
        if base.shape == "rect":
            w = base.aniso.weights if base.aniso else (1.0,) * base.grid.ndim
            rect = tuple(r * t**a for r, a in zip(base.rect, w))
            out.append(dataclasses.replace(base, rect=rect))
        else:
            out.append(dataclasses.replace(base, radius=base.radius * t))
    return out


"""Dyadic Littlewood-Paley windows on the frequency lattice of a grid.

``psi`` equals 1 on ``[0, 1]``, 0 on ``[2, inf)`` and is the smooth bridge

    psi(t) = h(2 - t) / (h(2 - t) + h(t - 1)),   h(s) = exp(-1/s) (s > 0)

in between.  With ``Psi_j(xi) = psi(2**-j |xi|_a)`` the windows are
``Phi_0 = Psi_0`` and ``Phi_j = Psi_j - Psi_{j-1}``; ``Phi_j`` lives on the
corona ``2**(j-1) <= |xi|_a <= 2**(j+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple, Sequence

import numpy as np

from .anisotropy import Anisotropy, aniso_distance_many
from .grid import GridError, GridSpec, SampledField, field_from_centred, physical_frequencies, to_spectrum

__all__ = [
    "CutoffProfile",
    "make_cutoff",
    "LPFamily",
    "build_family",
    "max_admissible_level",
    "lattice_distance",
    "decompose",
    "DecompositionError",
    "SpectralRectangle",
    "spectral_rectangle",
    "check_rectangle_condition",
    "DEFAULT_THRESHOLD",
]

DEFAULT_THRESHOLD = 1e-12


def _h(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


@dataclass(frozen=True)
class CutoffProfile:
    inner: float = 1.0
    outer: float = 2.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        # rescale so the bridge formula always runs on [1, 2]
        u = 1.0 + (t - self.inner) / (self.outer - self.inner)
        up, down = _h(2.0 - u), _h(u - 1.0)
        out = np.where(u <= 1.0, 1.0, np.where(u >= 2.0, 0.0, up / np.where(up + down > 0, up + down, 1.0)))
        return out if out.ndim else float(out)


def make_cutoff() -> CutoffProfile:
    return CutoffProfile()


def lattice_distance(spec: GridSpec, aniso: Anisotropy) -> np.ndarray:
    """``|xi|_a`` at every centred lattice point of ``spec``."""
    if aniso.ndim != spec.ndim:
        raise GridError(f"anisotropy has {aniso.ndim} weights, grid has {spec.ndim} axes")
    mesh = np.meshgrid(*physical_frequencies(spec), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    return aniso_distance_many(pts, aniso).reshape(spec.shape)


def max_admissible_level(spec: GridSpec, aniso: Anisotropy) -> int:
    """Largest ``jmax`` with ``2**(a_k (jmax+1)) < Nyquist_k`` on every axis,
    or -1 when even ``jmax = 0`` does not fit."""
    best = math.inf
    for a_k, nyq in zip(aniso.weights, spec.nyquist):
        # largest integer m with 2**(a_k m) < nyq, then jmax = m - 1
        m = math.floor(math.log2(nyq) / a_k)
        if 2.0 ** (a_k * m) >= nyq:
            m -= 1
        best = min(best, m - 1)
    return int(best)


@dataclass(frozen=True, eq=False)
class LPFamily:
    spec: GridSpec
    aniso: Anisotropy
    jmax: int
    profile: CutoffProfile
    distance: np.ndarray = dc_field(repr=False)
    windows: np.ndarray = dc_field(repr=False)  # shape (jmax+1, *grid), centred

    @property
    def levels(self) -> int:
        return self.jmax + 1

    def window(self, j: int) -> np.ndarray:
        return self.windows[j]


def build_family(spec: GridSpec, aniso, jmax: int, profile: CutoffProfile | None = None) -> LPFamily:
    aniso = aniso if isinstance(aniso, Anisotropy) else Anisotropy(aniso)
    profile = profile or make_cutoff()
    if jmax < 0:
        raise ValueError(f"jmax must be >= 0, got {jmax}")
    if aniso.ndim != spec.ndim:
        raise GridError(f"anisotropy has {aniso.ndim} weights, grid has {spec.ndim} axes")
    for k, (a_k, nyq) in enumerate(zip(aniso.weights, spec.nyquist)):
        top = 2.0 ** (a_k * (jmax + 1))
        if not math.isfinite(top) or top >= nyq:
            raise GridError(
                f"jmax={jmax} too large: axis {k + 1} needs 2^(a_k(jmax+1)) = {top:g} "
                f"< Nyquist {nyq:g}"
            )
    dist = lattice_distance(spec, aniso)
    dist.setflags(write=False)
    big = np.stack([profile(dist / 2.0**j) for j in range(jmax + 1)])
    windows = big.copy()
    windows[1:] = big[1:] - big[:-1]
    windows.setflags(write=False)
    return LPFamily(spec, aniso, jmax, profile, dist, windows)


class DecompositionError(ValueError):
    def __init__(self, largest: float, limit: float):
        self.largest = largest
        self.limit = limit
        super().__init__(
            f"field is not resolved by the family: largest active |xi|_a = {largest:.6g} "
            f"exceeds 2^(jmax-1) = {limit:g}"
        )


def _active(coefs: np.ndarray, threshold: float) -> np.ndarray:
    mag = np.abs(coefs)
    top = mag.max()
    if top == 0:
        return np.zeros(mag.shape, dtype=bool)
    return mag > threshold * top


def decompose(field: SampledField, family: LPFamily, threshold: float = DEFAULT_THRESHOLD) -> list[SampledField]:
    """Bands ``u_j = F^-1(Phi_j F u)`` for ``j = 0..jmax``."""
    if field.spec != family.spec:
        raise GridError("field and family live on different grids")
    coefs = to_spectrum(field)
    active = _active(coefs, threshold)
    limit = 2.0 ** (family.jmax - 1)
    if active.any():
        largest = float(family.distance[active].max())
        if largest > limit * (1 + 1e-12):
            raise DecompositionError(largest, limit)
    return [field_from_centred(field.spec, w * coefs) for w in family.windows]


class SpectralRectangle(NamedTuple):
    half_widths: np.ndarray
    empty: bool


def spectral_rectangle(field: SampledField, threshold: float = DEFAULT_THRESHOLD) -> SpectralRectangle:
    """Smallest ``[-R_1, R_1] x ... x [-R_n, R_n]`` holding every mode with
    ``|coef| > threshold * max|coef|``."""
    if not 0 <= threshold < 1:
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    active = _active(to_spectrum(field), threshold)
    if not active.any():
        return SpectralRectangle(np.zeros(field.ndim), True)
    R = np.empty(field.ndim)
    for k, xi in enumerate(physical_frequencies(field.spec)):
        other = tuple(ax for ax in range(field.ndim) if ax != k)
        on_axis = active.any(axis=other) if other else active
        R[k] = np.abs(xi[on_axis]).max()
    return SpectralRectangle(R, False)


def check_rectangle_condition(
    fields: Sequence[SampledField], Rbase, A: float, threshold: float = DEFAULT_THRESHOLD
) -> bool:
    """True iff the spectrum of ``fields[j]`` sits in ``prod_k [-A R_k**j, A R_k**j]``."""
    Rbase = np.asarray(Rbase, dtype=float)
    if np.any(Rbase <= 1):
        raise ValueError(f"rectangle bases must exceed 1, got {Rbase}")
    if not A > 0:
        raise ValueError(f"A must be positive, got {A}")
    for j, f in enumerate(fields):
        rect = spectral_rectangle(f, threshold)
        if rect.empty:
            continue
        bound = A * Rbase**j
        if np.any(rect.half_widths > bound * (1 + 1e-12)):
            return False
    return True

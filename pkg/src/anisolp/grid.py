"""Uniform periodic grids and trigonometric polynomials sampled on them.

A field on the box ``[0, L_1) x ... x [0, L_n)`` is stored as a complex
array of shape ``(N_1, ..., N_n)``; ``values[i_1, ..., i_n]`` is the sample
at ``x_k = i_k * L_k / N_k``.  Spectra are stored centred: entry ``i`` along
axis ``k`` holds integer frequency ``i - N_k // 2``, so the index range is
``[-N_k/2, N_k/2)``.  Normalisation is chosen so that

    values(x) = sum_k spectrum[k] * exp(2j*pi * sum_k k_k x_k / L_k)

i.e. amplitudes passed to :func:`from_spectrum` come back verbatim from
:func:`to_spectrum`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GridError",
    "NyquistError",
    "GridSpec",
    "SampledField",
    "from_spectrum",
    "to_spectrum",
    "frequency_axes",
    "physical_frequencies",
]


class GridError(ValueError):
    """Invalid grid description or incompatible grids."""


class NyquistError(GridError):
    """A frequency sits at or beyond the Nyquist limit of some axis."""

    def __init__(self, axis: int, freq: float, limit: float):
        self.axis = axis
        self.freq = freq
        self.limit = limit
        super().__init__(
            f"frequency {freq!r} on axis {axis + 1} is outside the Nyquist range "
            f"(|k| must be < {limit!r})"
        )


@dataclass(frozen=True)
class GridSpec:
    """Shape and physical extent of a periodic box."""

    samples: tuple[int, ...]
    periods: tuple[float, ...]

    def __init__(self, samples: Sequence[int], periods: Sequence[float] | None = None):
        samples = tuple(int(s) for s in samples)
        if periods is None:
            periods = (2 * np.pi,) * len(samples)
        periods = tuple(float(p) for p in periods)
        if len(samples) < 1:
            raise GridError("a grid needs at least one axis")
        if len(periods) != len(samples):
            raise GridError(
                f"{len(samples)} sample counts but {len(periods)} periods given"
            )
        for k, nk in enumerate(samples):
            if nk < 2 or nk % 2:
                raise GridError(f"axis {k + 1}: sample count must be even and >= 2, got {nk}")
        for k, lk in enumerate(periods):
            if not (np.isfinite(lk) and lk > 0):
                raise GridError(f"axis {k + 1}: period must be positive and finite, got {lk}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "periods", periods)

    @classmethod
    def cube(cls, ndim: int, n: int, period: float = 2 * np.pi) -> "GridSpec":
        return cls((n,) * ndim, (period,) * ndim)

    @property
    def ndim(self) -> int:
        return len(self.samples)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.samples

    @property
    def size(self) -> int:
        return int(np.prod(self.samples))

    @property
    def cell_volume(self) -> float:
        return float(np.prod([lk / nk for lk, nk in zip(self.periods, self.samples)]))

    @property
    def volume(self) -> float:
        return float(np.prod(self.periods))

    @property
    def nyquist(self) -> tuple[float, ...]:
        """Angular Nyquist frequency ``pi * N_k / L_k`` per axis."""
        return tuple(np.pi * nk / lk for nk, lk in zip(self.samples, self.periods))

    def max_index(self, axis: int) -> int:
        """Largest admissible ``|k|`` on ``axis`` (strictly below Nyquist)."""
        return self.samples[axis] // 2 - 1

    def coordinates(self) -> list[np.ndarray]:
        return [np.arange(nk) * (lk / nk) for nk, lk in zip(self.samples, self.periods)]


def frequency_axes(spec: GridSpec) -> list[np.ndarray]:
    """Integer frequencies ``[-N/2, N/2)`` per axis, in centred order."""
    return [np.arange(-nk // 2, nk // 2) for nk in spec.samples]


def physical_frequencies(spec: GridSpec) -> list[np.ndarray]:
    """Angular frequencies ``2*pi*k/L`` per axis, in centred order."""
    return [2 * np.pi * k / lk for k, lk in zip(frequency_axes(spec), spec.periods)]


def _centred_to_fft(arr: np.ndarray) -> np.ndarray:
    return np.fft.ifftshift(arr)


def _fft_to_centred(arr: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(arr)


class SampledField:
    """Complex samples of a periodic function, with a lazily cached spectrum.

    The sample array is read-only once constructed.  The spectrum is computed
    at most once per instance; concurrent callers all receive the same array.
    """

    __slots__ = ("spec", "_values", "_spectrum", "_lock")

    def __init__(self, spec: GridSpec, values, spectrum: np.ndarray | None = None):
        arr = np.array(values, dtype=np.complex128, copy=True)
        if arr.shape != spec.shape:
            raise GridError(f"values have shape {arr.shape}, grid expects {spec.shape}")
        arr.setflags(write=False)
        self.spec = spec
        self._values = arr
        self._lock = threading.Lock()
        if spectrum is not None:
            spectrum = np.array(spectrum, dtype=np.complex128, copy=True)
            if spectrum.shape != spec.shape:
                raise GridError("spectrum shape does not match grid")
            spectrum.setflags(write=False)
        self._spectrum = spectrum

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def ndim(self) -> int:
        return self.spec.ndim

    @property
    def spectrum(self) -> np.ndarray:
        return to_spectrum(self)

    def __repr__(self) -> str:
        return f"SampledField(shape={self.spec.shape}, periods={self.spec.periods})"

    def _compute_spectrum(self) -> np.ndarray:
        spec = np.fft.fftn(self._values) / self.spec.size
        spec = _fft_to_centred(spec)
        spec.setflags(write=False)
        return spec

    # arithmetic is handy in tests and in the subadditivity checks
    def _check_same_grid(self, other: "SampledField") -> None:
        if other.spec != self.spec:
            raise GridError(f"grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other: "SampledField") -> "SampledField":
        self._check_same_grid(other)
        return SampledField(self.spec, self._values + other._values)

    def __sub__(self, other: "SampledField") -> "SampledField":
        self._check_same_grid(other)
        return SampledField(self.spec, self._values - other._values)

    def __mul__(self, scalar: complex) -> "SampledField":
        return SampledField(self.spec, self._values * scalar)

    __rmul__ = __mul__

    def abs(self) -> np.ndarray:
        return np.abs(self._values)


def from_spectrum(
    spec: GridSpec, coeffs: Iterable[tuple[Sequence[int], complex]] | dict
) -> SampledField:
    """Build the trigonometric polynomial ``sum c_k exp(i 2 pi k.x / L)``.

    ``coeffs`` is an iterable of ``(frequency_vector, amplitude)`` pairs or a
    mapping from frequency tuples to amplitudes.  Repeated frequencies add up.
    """
    items = coeffs.items() if isinstance(coeffs, dict) else coeffs
    centred = np.zeros(spec.shape, dtype=np.complex128)
    offsets = [nk // 2 for nk in spec.samples]
    for freq, amp in items:
        freq = tuple(int(k) for k in np.atleast_1d(freq))
        if len(freq) != spec.ndim:
            raise GridError(f"frequency {freq} has {len(freq)} components, grid has {spec.ndim}")
        for axis, k in enumerate(freq):
            if abs(k) >= spec.samples[axis] // 2:
                raise NyquistError(axis, k, spec.samples[axis] // 2)
        idx = tuple(k + o for k, o in zip(freq, offsets))
        centred[idx] += complex(amp)
    return field_from_centred(spec, centred)


def field_from_centred(spec: GridSpec, centred: np.ndarray) -> SampledField:
    """Field whose centred spectrum is ``centred`` (no Nyquist check)."""
    centred = np.asarray(centred, dtype=np.complex128)
    values = np.fft.ifftn(_centred_to_fft(centred)) * spec.size
    return SampledField(spec, values, spectrum=centred)


def to_spectrum(field: SampledField) -> np.ndarray:
    """Centred spectral coefficients of ``field`` (cached on the instance)."""
    if field._spectrum is None:
        if not np.all(np.isfinite(field._values)):
            raise GridError("field contains non-finite values")
        with field._lock:
            if field._spectrum is None:
                field._spectrum = field._compute_spectrum()
    return field._spectrum


def direct_dft(values: np.ndarray) -> np.ndarray:
    """O(N^2) reference DFT with the same normalisation and ordering as
    :func:`to_spectrum`.  Only meant for small grids in tests and checks."""
    values = np.asarray(values, dtype=np.complex128)
    out = values
    for axis, nk in enumerate(values.shape):
        k = np.arange(-nk // 2, nk // 2)
        m = np.arange(nk)
        mat = np.exp(-2j * np.pi * np.outer(k, m) / nk) / nk
        out = np.moveaxis(np.tensordot(mat, np.moveaxis(out, axis, 0), axes=(1, 0)), 0, axis)
    return out

"""Mixed Lebesgue quasi-norms and weighted sequence quasi-norms.

The mixed norm takes the ``p_1``-mean in ``x_1`` first, then the
``p_2``-mean of the result in ``x_2`` and so on; integrals are Riemann sums
with cell length ``L_k / N_k`` and ``p_k = inf`` is the grid maximum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .grid import GridError, SampledField

__all__ = [
    "MixedExponents",
    "SeqNormParams",
    "parse_exponent",
    "mixed_lp_norm",
    "mixed_lp_norm_array",
    "mixed_lp_norm_batch",
    "weighted_seq_norm",
    "InterpolationResult",
    "interpolation_ratio",
    "binary_sequence_search",
    "SubadditivityResult",
    "power_subadditivity_check",
]

INF = math.inf


def parse_exponent(token) -> float:
    """``'inf'``, ``'2'``, ``'0.5'`` or ``'1/2'`` -> float (``inf`` allowed)."""
    if isinstance(token, (int, float)):
        return float(token)
    text = str(token).strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INF
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse exponent {token!r}") from exc


@dataclass(frozen=True)
class MixedExponents:
    p: tuple[float, ...]

    def __init__(self, p):
        if isinstance(p, str):
            p = p.split(",")
        vals = tuple(parse_exponent(v) for v in np.atleast_1d(np.asarray(p, dtype=object)))
        if not vals:
            raise ValueError("need at least one exponent")
        for k, v in enumerate(vals):
            if not v > 0:
                raise ValueError(f"exponent p_{k + 1} = {v} must be > 0")
        object.__setattr__(self, "p", vals)

    @classmethod
    def uniform(cls, p: float, ndim: int) -> "MixedExponents":
        return cls((p,) * ndim)

    def __len__(self) -> int:
        return len(self.p)

    def __iter__(self):
        return iter(self.p)

    def __getitem__(self, k):
        return self.p[k]

    @property
    def finite(self) -> bool:
        return all(math.isfinite(v) for v in self.p)

    @property
    def reciprocals(self) -> np.ndarray:
        return np.array([0.0 if math.isinf(v) else 1.0 / v for v in self.p])

    def __str__(self) -> str:
        return ",".join("inf" if math.isinf(v) else f"{v:g}" for v in self.p)


def _as_exponents(p, ndim: int | None = None) -> MixedExponents:
    p = p if isinstance(p, MixedExponents) else MixedExponents(p)
    if ndim is not None and len(p) != ndim:
        raise ValueError(f"{len(p)} exponents given for a {ndim}-dimensional field")
    return p


def _reduce_axis(arr: np.ndarray, p: float, h: float) -> np.ndarray:
    # arr >= 0; scale by the running maximum so tiny p cannot overflow
    if math.isinf(p):
        return arr.max(axis=0)
    top = arr.max(axis=0)
    safe = np.where(top > 0, top, 1.0)
    return top * (h * ((arr / safe) ** p).sum(axis=0)) ** (1.0 / p)


def mixed_lp_norm_array(absvals: np.ndarray, p, cell: Sequence[float]) -> float:
    """Mixed norm of a nonnegative array with per-axis cell lengths."""
    arr = np.asarray(absvals, dtype=float)
    p = _as_exponents(p, arr.ndim)
    for k in range(arr.ndim):
        # axis k of the original array is always the leading axis here
        arr = _reduce_axis(arr, p[k], cell[k])
    return float(arr)


def mixed_lp_norm_batch(absvals: np.ndarray, p, cell: Sequence[float]) -> np.ndarray:
    """Mixed norms of a stack ``absvals[b, x_1, ..., x_n]`` (one per ``b``)."""
    arr = np.moveaxis(np.asarray(absvals, dtype=float), 0, -1)
    p = _as_exponents(p, arr.ndim - 1)
    for k in range(len(p)):
        arr = _reduce_axis(arr, p[k], cell[k])
    return arr


def mixed_lp_norm(field: SampledField, p) -> float:
    """``||f||_{L_p}`` with ``p = (p_1, ..., p_n)``, innermost ``x_1``."""
    p = _as_exponents(p, field.ndim)
    if not np.all(np.isfinite(field.values)):
        raise GridError("field contains non-finite values")
    cell = [lk / nk for lk, nk in zip(field.spec.periods, field.spec.samples)]
    return mixed_lp_norm_array(np.abs(field.values), p, cell)


@dataclass(frozen=True)
class SeqNormParams:
    s: float
    q: float
    base: float = 2.0

    def __post_init__(self):
        q = parse_exponent(self.q)
        object.__setattr__(self, "q", q)
        if not q > 0:
            raise ValueError(f"q must be > 0, got {q}")
        if not self.base > 1:
            raise ValueError(f"base must be > 1, got {self.base}")


def _lq(vals: np.ndarray, q: float) -> float:
    vals = np.abs(vals)
    top = vals.max()
    if math.isinf(q) or top == 0:
        return float(top)
    return float(top * ((vals / top) ** q).sum() ** (1.0 / q))


def weighted_seq_norm(seq, params: SeqNormParams) -> float:
    """``(sum_j base**(s j q) |a_j|**q)**(1/q)``; sup over ``j`` when ``q = inf``."""
    a = np.asarray(seq, dtype=complex)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("sequence must be a non-empty 1-d array")
    if not np.all(np.isfinite(a)):
        raise ValueError("sequence has non-finite entries")
    j = np.arange(a.size)
    return _lq(np.float_power(params.base, params.s * j) * np.abs(a), params.q)


@dataclass(frozen=True)
class InterpolationResult:
    lhs: float
    rhs: float
    ratio: float
    degenerate: bool = False


def interpolation_ratio(seq, s0: float, s1: float, theta: float, q, base: float = 2.0) -> InterpolationResult:
    """Compare ``||a||_{l^{theta s0 + (1-theta) s1}_q}`` with
    ``||a||_{l^{s0}_inf}**theta * ||a||_{l^{s1}_inf}**(1-theta)``."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if not s1 < s0:
        raise ValueError(f"need s1 < s0, got s0={s0}, s1={s1}")
    q = parse_exponent(q)
    s = theta * s0 + (1 - theta) * s1
    lhs = weighted_seq_norm(seq, SeqNormParams(s, q, base))
    hi = weighted_seq_norm(seq, SeqNormParams(s0, INF, base))
    lo = weighted_seq_norm(seq, SeqNormParams(s1, INF, base))
    rhs = hi**theta * lo ** (1 - theta)
    if rhs == 0:
        if lhs == 0:
            return InterpolationResult(0.0, 0.0, 0.0, degenerate=True)
        return InterpolationResult(lhs, rhs, INF)
    return InterpolationResult(lhs, rhs, lhs / rhs)


def binary_sequence_search(
    max_len: int, s0: float, s1: float, theta: float, q, base: float = 2.0, seed: int | None = None
) -> tuple[float, tuple[int, ...]]:
    """Largest interpolation ratio over all nonzero 0/1 sequences of length
    ``<= max_len``.  ``seed`` only permutes the visiting order; the maximum
    and its (lexicographically first) maximiser do not depend on it."""
    cands = [
        bits
        for length in range(1, max_len + 1)
        for bits in itertools.product((0, 1), repeat=length)
        if bits[-1] == 1
    ]
    if seed is not None:
        order = np.random.default_rng(seed).permutation(len(cands))
        cands = [cands[i] for i in order]
    best, arg = -INF, None
    for bits in cands:
        r = interpolation_ratio(np.array(bits, dtype=float), s0, s1, theta, q, base).ratio
        if r > best or (r == best and bits < arg):
            best, arg = r, bits
    return best, arg


@dataclass(frozen=True)
class SubadditivityResult:
    lam: float
    lhs: float
    rhs: float
    holds: bool


def power_subadditivity_check(f: SampledField, g: SampledField, p) -> SubadditivityResult:
    """``||f+g||**lam <= ||f||**lam + ||g||**lam`` with ``lam = min(1, p_k)``."""
    if f.spec != g.spec:
        raise GridError(f"grid mismatch: {f.spec} vs {g.spec}")
    p = _as_exponents(p, f.ndim)
    lam = min(1.0, *p.p)
    lhs = mixed_lp_norm(f + g, p) ** lam
    rhs = mixed_lp_norm(f, p) ** lam + mixed_lp_norm(g, p) ** lam
    return SubadditivityResult(lam, lhs, rhs, lhs <= rhs * (1 + 1e-10))

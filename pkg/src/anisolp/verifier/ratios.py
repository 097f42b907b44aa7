"""Single-trial ratios ``lhs / (rhs_scale * rhs_norm)`` for each inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import kernels
from ..anisotropy import Anisotropy
from ..grid import SampledField, physical_frequencies, to_spectrum
from ..littlewood_paley import (
    DEFAULT_THRESHOLD,
    LPFamily,
    check_rectangle_condition,
    decompose,
    spectral_rectangle,
)
from ..mixed_norm import MixedExponents, mixed_lp_norm, mixed_lp_norm_array, parse_exponent
from ..space_norms import SpaceParams, besov_norm, triebel_norm

__all__ = [
    "RatioTrial",
    "SupportError",
    "ExponentError",
    "BalanceError",
    "spectral_radius",
    "npp_ratio",
    "mixed_npp_ratio",
    "seq_npp_ratio",
    "sobolev_ratio",
    "balance_gap",
    "check_sobolev_params",
    "BALANCE_TOL",
]

BALANCE_TOL = 1e-12
# declared supports are compared with measured ones up to this relative slack
SUPPORT_SLACK = 1e-12


class SupportError(ValueError):
    """The spectrum is not inside the declared ball or rectangle."""


class ExponentError(ValueError):
    """Exponents violate the hypotheses of the inequality."""


class BalanceError(ValueError):
    def __init__(self, lhs: float, rhs: float):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"balance violated: s - sum(a_k/p_k) = {lhs!r} but t - sum(a_k/r_k) = {rhs!r} "
            f"(gap {abs(lhs - rhs):.3g} > {BALANCE_TOL:g})"
        )


@dataclass
class RatioTrial:
    trial: int
    lhs: float
    rhs_scale: float
    rhs_norm: float
    ratio: float
    status: str = "ok"  # or "skipped" for zero fields
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _ratio_trial(trial, lhs, scale, norm, **extra) -> RatioTrial:
    if norm == 0 and lhs == 0:
        return RatioTrial(trial, lhs, scale, norm, math.nan, "skipped", extra)
    den = scale * norm
    ratio = lhs / den if den > 0 else math.inf
    return RatioTrial(trial, lhs, scale, norm, ratio, "ok", extra)


def _exps(p, ndim) -> MixedExponents:
    p = p if isinstance(p, MixedExponents) else MixedExponents(p)
    if len(p) != ndim:
        raise ExponentError(f"{len(p)} exponents for a {ndim}-dimensional field")
    return p


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def spectral_radius(f: SampledField, threshold: float = DEFAULT_THRESHOLD) -> float:
    """Largest Euclidean ``|xi|`` over active modes (0 for the zero field)."""
    coefs = np.abs(to_spectrum(f))
    top = coefs.max()
    if top == 0:
        return 0.0
    mesh = np.meshgrid(*physical_frequencies(f.spec), indexing="ij")
    rad = np.sqrt(sum(xi**2 for xi in mesh))
    return float(rad[coefs > threshold * top].max())


def npp_ratio(f: SampledField, p, r, R: float, trial: int = 0) -> RatioTrial:
    """``||f||_r / (R**(n/p - n/r) ||f||_p)`` for ``f`` with spectrum in ``|xi| <= R``."""
    p, r = parse_exponent(p), parse_exponent(r)
    if not 0 < p <= r:
        raise ExponentError(f"need 0 < p <= r, got p={p}, r={r}")
    if not R > 0:
        raise SupportError(f"radius must be positive, got {R}")
    rad = spectral_radius(f)
    if rad > R * (1 + SUPPORT_SLACK):
        raise SupportError(f"spectrum reaches |xi| = {rad:.6g} > R = {R:g}")
    n = f.ndim
    lhs = mixed_lp_norm(f, (r,) * n)
    rhs = lhs if p == r else mixed_lp_norm(f, (p,) * n)
    scale = R ** (n * (_inv(p) - _inv(r)))
    return _ratio_trial(trial, lhs, scale, rhs, R=R)


def mixed_npp_ratio(f: SampledField, p, r, R, trial: int = 0) -> RatioTrial:
    """``||f||_{L_r} / (prod_k R_k**(1/p_k - 1/r_k) ||f||_{L_p})`` for ``f``
    with spectrum in ``prod_k [-R_k, R_k]``."""
    p, r = _exps(p, f.ndim), _exps(r, f.ndim)
    for k, (pk, rk) in enumerate(zip(p, r)):
        if pk > rk:
            raise ExponentError(f"axis {k + 1}: p_{k + 1} = {pk} exceeds r_{k + 1} = {rk}")
    R = np.asarray(R, dtype=float)
    if R.shape != (f.ndim,) or np.any(R <= 0):
        raise SupportError(f"need {f.ndim} positive half-widths, got {R}")
    rect = spectral_rectangle(f)
    over = rect.half_widths > R * (1 + SUPPORT_SLACK)
    if over.any():
        k = int(np.flatnonzero(over)[0])
        raise SupportError(
            f"axis {k + 1}: spectrum reaches |xi_{k + 1}| = {rect.half_widths[k]:.6g} > R = {R[k]:g}"
        )
    lhs = mixed_lp_norm(f, r)
    rhs = lhs if p == r else mixed_lp_norm(f, p)
    scale = float(np.prod(R ** (p.reciprocals - r.reciprocals)))
    return _ratio_trial(trial, lhs, scale, rhs, R=tuple(R))


def seq_npp_ratio(
    fs: Sequence[SampledField], p, r, Rbase, A: float, q, trial: int = 0
) -> RatioTrial:
    """``||(sum_j |f_j|**q)**(1/q)||_{L_r} / ||sup_j W**j |f_j| ||_{L_p}`` with
    ``W = prod_k R_k**(1/p_k - 1/r_k)``, for sequences obeying the geometric
    rectangle condition."""
    if not fs:
        raise ValueError("empty sequence")
    ndim = fs[0].ndim
    p, r = _exps(p, ndim), _exps(r, ndim)
    q = parse_exponent(q)
    if p == r:
        raise ExponentError("the sequence inequality needs p != r")
    for k, (pk, rk) in enumerate(zip(p, r)):
        if not (0 < pk <= rk < math.inf):
            raise ExponentError(f"axis {k + 1}: need 0 < p_k <= r_k < inf, got p={pk}, r={rk}")
    Rbase = np.asarray(Rbase, dtype=float)
    if not check_rectangle_condition(fs, Rbase, A):
        raise SupportError(f"sequence violates the rectangle condition for R={tuple(Rbase)}, A={A}")
    spec = fs[0].spec
    cell = [lk / nk for lk, nk in zip(spec.periods, spec.samples)]
    stack = np.stack([np.abs(f.values) for f in fs])
    j = np.arange(len(fs))
    lhs = mixed_lp_norm_array(kernels.band_lq(stack, np.ones(len(fs)), q), r, cell)
    growth = float(np.prod(Rbase ** (p.reciprocals - r.reciprocals)))
    weights = growth**j
    rhs = mixed_lp_norm_array(kernels.band_lq(stack, weights, math.inf), p, cell)
    return _ratio_trial(trial, lhs, 1.0, rhs, Rbase=tuple(Rbase), A=A)


def balance_gap(aniso: Anisotropy, s: float, t: float, p, r) -> tuple[float, float]:
    """Both sides ``s - sum a_k/p_k`` and ``t - sum a_k/r_k``."""
    w = np.asarray(aniso.weights)
    p = p if isinstance(p, MixedExponents) else MixedExponents(p)
    r = r if isinstance(r, MixedExponents) else MixedExponents(r)
    return s - float(np.dot(w, p.reciprocals)), t - float(np.dot(w, r.reciprocals))


def check_sobolev_params(aniso: Anisotropy, s: float, t: float, p, r, space: str = "F"):
    """Validate the embedding hypotheses; returns ``(p, r)`` as exponents."""
    p, r = _exps(p, aniso.ndim), _exps(r, aniso.ndim)
    left, right = balance_gap(aniso, s, t, p, r)
    if abs(left - right) > BALANCE_TOL:
        raise BalanceError(left, right)
    for k, (pk, rk) in enumerate(zip(p, r)):
        if rk < pk:
            raise ExponentError(f"axis {k + 1}: r_{k + 1} = {rk} is below p_{k + 1} = {pk}")
    if not s > t:
        raise ExponentError(f"need s > t, got s={s}, t={t}")
    if space.upper() == "F" and not (p.finite and r.finite):
        raise ExponentError("the F-embedding needs finite p_k and r_k")
    return p, r


def sobolev_ratio(
    u: SampledField | None,
    family: LPFamily,
    s: float,
    t: float,
    p,
    r,
    q,
    space: str = "F",
    trial: int = 0,
    bands: Sequence[SampledField] | None = None,
) -> RatioTrial:
    """``F^{t}_{r,q}(u) / F^{s}_{p,inf}(u)`` (or ``B^t_{r,q} / B^s_{p,q}``)
    under the balance ``s - sum a_k/p_k = t - sum a_k/r_k``."""
    aniso = family.aniso
    p, r = check_sobolev_params(aniso, s, t, p, r, space)
    q = parse_exponent(q)
    space = space.upper()
    if bands is None:
        bands = decompose(u, family)
    if space == "F":
        lhs = triebel_norm(bands, SpaceParams(t, aniso, r, q, "F"))
        rhs = triebel_norm(bands, SpaceParams(s, aniso, p, math.inf, "F"))
    elif space == "B":
        lhs = besov_norm(bands, SpaceParams(t, aniso, r, q, "B"))
        rhs = besov_norm(bands, SpaceParams(s, aniso, p, q, "B"))
    else:
        raise ValueError(f"space must be 'F' or 'B', got {space!r}")
    return _ratio_trial(trial, lhs, 1.0, rhs, space=space)

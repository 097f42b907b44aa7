"""Besov and Lizorkin-Triebel quasi-norms computed from a band list.

The norms take the bands ``u_0, ..., u_J`` of a Littlewood-Paley
decomposition as input so one decomposition can serve a whole sweep over
``(s, p, q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import kernels
from .anisotropy import Anisotropy
from .grid import GridError, SampledField
from .mixed_norm import MixedExponents, mixed_lp_norm, mixed_lp_norm_array, parse_exponent

__all__ = [
    "SpaceParams",
    "besov_norm",
    "triebel_norm",
    "space_norm",
    "EmbeddingReport",
    "bfb_embedding_check",
]


@dataclass(frozen=True)
class SpaceParams:
    s: float
    aniso: Anisotropy
    p: MixedExponents
    q: float
    family: Literal["B", "F"] = "B"

    def __post_init__(self):
        fam = str(self.family).upper()
        if fam not in ("B", "F"):
            raise ValueError(f"family must be 'B' or 'F', got {self.family!r}")
        object.__setattr__(self, "family", fam)
        if not isinstance(self.aniso, Anisotropy):
            object.__setattr__(self, "aniso", Anisotropy(self.aniso))
        if not isinstance(self.p, MixedExponents):
            object.__setattr__(self, "p", MixedExponents(self.p))
        q = parse_exponent(self.q)
        if not q > 0:
            raise ValueError(f"q must be > 0, got {q}")
        object.__setattr__(self, "q", q)
        if len(self.p) != self.aniso.ndim:
            raise ValueError("p and the anisotropy must have the same length")
        if fam == "F" and not self.p.finite:
            raise ValueError(f"F-spaces need every p_k < inf, got p = ({self.p})")

    def with_(self, **changes) -> "SpaceParams":
        base = dict(s=self.s, aniso=self.aniso, p=self.p, q=self.q, family=self.family)
        base.update(changes)
        return SpaceParams(**base)


def _check_bands(bands: Sequence[SampledField]) -> None:
    if not bands:
        raise ValueError("empty band list")
    spec = bands[0].spec
    for u in bands[1:]:
        if u.spec != spec:
            raise GridError("bands live on different grids")


def _lq(vals: np.ndarray, q: float) -> float:
    top = vals.max()
    if math.isinf(q) or top == 0:
        return float(top)
    return float(top * ((vals / top) ** q).sum() ** (1.0 / q))


def besov_norm(bands: Sequence[SampledField], params: SpaceParams) -> float:
    """``(sum_j 2**(s j q) ||u_j||_{L_p}**q)**(1/q)``."""
    if params.family != "B":
        raise ValueError("besov_norm needs family 'B'")
    _check_bands(bands)
    norms = np.array([mixed_lp_norm(u, params.p) for u in bands])
    weights = 2.0 ** (params.s * np.arange(len(bands)))
    return _lq(weights * norms, params.q)


def triebel_norm(bands: Sequence[SampledField], params: SpaceParams) -> float:
    """``|| (sum_j 2**(s j q) |u_j(.)|**q)**(1/q) ||_{L_p}``."""
    if params.family != "F":
        raise ValueError("triebel_norm needs family 'F'")
    if not params.p.finite:
        raise ValueError("F-norms are only defined for finite p")
    _check_bands(bands)
    spec = bands[0].spec
    stack = np.stack([np.abs(u.values) for u in bands])
    weights = 2.0 ** (params.s * np.arange(len(bands)))
    inner = kernels.band_lq(stack, weights, params.q)
    cell = [lk / nk for lk, nk in zip(spec.periods, spec.samples)]
    return mixed_lp_norm_array(inner, params.p, cell)


def space_norm(bands: Sequence[SampledField], params: SpaceParams) -> float:
    return besov_norm(bands, params) if params.family == "B" else triebel_norm(bands, params)


@dataclass(frozen=True)
class EmbeddingReport:
    q: float
    besov_min: float  # B_{p, min p_k}
    triebel: float  # F_{p, q}
    besov_max: float  # B_{p, max p_k}
    lower_ratio: float  # F / B_min
    upper_ratio: float  # B_max / F


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return 0.0 if a == 0 else math.inf
    return a / b


def bfb_embedding_check(bands: Sequence[SampledField], s: float, aniso, p, qlist) -> list[EmbeddingReport]:
    """Norms on both sides of ``B_{p,min p} -> F_{p,q} -> B_{p,max p}``, one
    triple per ``q`` in ``qlist``."""
    qs = [qlist] if np.isscalar(qlist) or isinstance(qlist, str) else list(qlist)
    base = SpaceParams(s, aniso, p, qs[0], "F")
    pk = base.p.p
    b_min = besov_norm(bands, base.with_(q=min(pk), family="B"))
    b_max = besov_norm(bands, base.with_(q=max(pk), family="B"))
    out = []
    for q in qs:
        params = base.with_(q=q)
        f = triebel_norm(bands, params)
        out.append(EmbeddingReport(params.q, b_min, f, b_max, _ratio(f, b_min), _ratio(b_max, f)))
    return out

"""Monte Carlo suites, one per inequality family.

Each suite returns a :class:`VerificationReport`.  The grids are chosen
from the requested supports so that all frequencies stay strictly inside
Nyquist and the Littlewood-Paley windows fit.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Sequence

import numpy as np

from ..anisotropy import Anisotropy
from ..grid import GridSpec, field_from_centred
from ..littlewood_paley import build_family, spectral_rectangle
from ..mixed_norm import (
    MixedExponents,
    binary_sequence_search,
    interpolation_ratio,
    mixed_lp_norm,
    mixed_lp_norm_batch,
    parse_exponent,
)
from ..space_norms import SpaceParams, besov_norm, triebel_norm
from .ensemble import EnsembleSpec, dilated_specs, generate, generate_bands, map_trials, support_mask, trial_rng
from .ratios import (
    BALANCE_TOL,
    BalanceError,
    RatioTrial,
    balance_gap,
    check_sobolev_params,
    mixed_npp_ratio,
    npp_ratio,
    seq_npp_ratio,
    sobolev_ratio,
    spectral_radius,
)
from .report import VerificationReport, empirical_constant, fit_loglog_slope

__all__ = [
    "smooth_size",
    "grid_for_support",
    "grid_for_levels",
    "npp_suite",
    "mixed_npp_suite",
    "seq_npp_suite",
    "sobolev_suite",
    "interpolation_suite",
    "subadditivity_suite",
    "embedding_suite",
    "scaling_sweep",
    "run_all",
    "seed_spread",
    "SLOPE_TOL",
]

SLOPE_TOL = 0.15
CONSISTENCY_SLACK = 1e-10


def smooth_size(minimum: int) -> int:
    """Smallest even 5-smooth integer ``>= minimum`` (FFT friendly)."""
    n = max(2, int(math.ceil(minimum)))
    while True:
        if n % 2 == 0:
            m = n
            for f in (2, 3, 5):
                while m % f == 0:
                    m //= f
            if m == 1:
                return n
        n += 1


def grid_for_support(half_widths: Sequence[float], oversample: float = 4.0) -> GridSpec:
    """Grid on ``[0, 2 pi)^n`` with at least ``oversample * R_k`` samples per axis."""
    return GridSpec([smooth_size(max(8, oversample * (r + 1))) for r in half_widths])


def grid_for_levels(aniso: Anisotropy, jmax: int) -> GridSpec:
    """Smallest smooth grid on ``[0, 2 pi)^n`` admitting ``jmax`` levels."""
    return GridSpec([smooth_size(2 * 2.0 ** (a * (jmax + 1)) + 1) for a in aniso.weights])


def seed_spread(values: Sequence[float]) -> float:
    """``max / min - 1`` of positive values (the seed-stability measure)."""
    v = np.asarray(values, dtype=float)
    return float(v.max() / v.min() - 1.0)


def _exps(p, ndim) -> MixedExponents:
    p = MixedExponents(p) if not isinstance(p, MixedExponents) else p
    if len(p) == 1 and ndim > 1:
        p = MixedExponents(p.p * ndim)
    return p


def _cfg_exps(p) -> str:
    return str(p if isinstance(p, MixedExponents) else MixedExponents(p))


# -- Nikol'skij-Plancherel-Polya ------------------------------------------------


def npp_suite(n: int, p, r, R: float, trials: int = 100, seed: int = 0, kind: str = "random-rect",
              grid: GridSpec | None = None, threads: int | None = None) -> VerificationReport:
    """Unmixed inequality on fields with spectrum in the ball ``|xi| <= R``."""
    p, r = parse_exponent(p), parse_exponent(r)
    grid = grid or grid_for_support([R] * n)
    spec = EnsembleSpec(grid, kind, count=trials, seed=seed, shape="ball", radius=R)
    fields = generate(spec, threads)

    def one(i: int) -> RatioTrial:
        f = fields[i]
        # the measured radius is the tightest admissible one
        rad = max(spectral_radius(f), min(2 * math.pi / L for L in grid.periods))
        return npp_ratio(f, p, r, rad, trial=i)

    results = map_trials(one, trials, threads)
    control = [npp_ratio(f, p, p, R).ratio for f in fields[: min(5, trials)]]
    report = VerificationReport(
        "npp",
        {"n": n, "p": p, "r": r, "R": R, "trials": trials, "seed": seed, "kind": kind, "grid": list(grid.samples)},
        results,
    )
    report.checks["control_ratio_one"] = all(abs(c - 1.0) <= 1e-12 for c in control if not math.isnan(c))
    report.checks["c_emp_finite"] = math.isfinite(report.c_emp)
    return report


def _succession_bound(f, p: MixedExponents, r: MixedExponents, R) -> float:
    """Product of single-axis ratios along ``p -> (r_1, p_2, ...) -> ... -> r``."""
    prod = 1.0
    cur = list(p.p)
    for k in range(len(cur)):
        nxt = list(cur)
        nxt[k] = r.p[k]
        if nxt != cur:
            prod *= mixed_npp_ratio(f, cur, nxt, R).ratio
        cur = nxt
    return prod


def mixed_npp_suite(p, r, R: Sequence[float], trials: int = 100, seed: int = 0, kind: str = "random-rect",
                    grid: GridSpec | None = None, threads: int | None = None) -> VerificationReport:
    """Mixed-norm inequality on fields with spectrum in ``prod [-R_k, R_k]``."""
    R = tuple(float(x) for x in R)
    n = len(R)
    p, r = _exps(p, n), _exps(r, n)
    grid = grid or grid_for_support(R)
    spec = EnsembleSpec(grid, kind, rect=R, count=trials, seed=seed)
    fields = generate(spec, threads)
    floor = np.array([2 * math.pi / L for L in grid.periods])

    def one(i: int) -> RatioTrial:
        f = fields[i]
        tight = np.maximum(spectral_rectangle(f).half_widths, floor)
        t = mixed_npp_ratio(f, p, r, tight, trial=i)
        t.extra["chain"] = _succession_bound(f, p, r, tight)
        return t

    results = map_trials(one, trials, threads)
    control = [mixed_npp_ratio(f, p, p, R).ratio for f in fields[: min(5, trials)]]
    report = VerificationReport(
        "mixed-npp",
        {"p": _cfg_exps(p), "r": _cfg_exps(r), "R": list(R), "trials": trials, "seed": seed, "kind": kind,
         "grid": list(grid.samples)},
        results,
    )
    report.checks["control_ratio_one"] = all(abs(c - 1.0) <= 1e-12 for c in control)
    report.checks["succession_consistent"] = all(
        t.ratio <= t.extra["chain"] * (1 + CONSISTENCY_SLACK) for t in results if t.ok
    )
    report.checks["c_emp_finite"] = math.isfinite(report.c_emp)
    return report


def seq_npp_suite(aniso, p, r, q, trials: int = 100, seed: int = 0, jmax: int | None = None,
                  grid: GridSpec | None = None, threads: int | None = None) -> VerificationReport:
    """Sequence inequality on Littlewood-Paley bands, with ``R_k = 2**a_k`` and
    ``A = 2**max(a)``."""
    aniso = aniso if isinstance(aniso, Anisotropy) else Anisotropy(aniso)
    n = aniso.ndim
    p, r = _exps(p, n), _exps(r, n)
    q = parse_exponent(q)
    if jmax is None:
        jmax = 4 if max(aniso.weights) <= 1 else 3
    grid = grid or grid_for_levels(aniso, jmax)
    family = build_family(grid, aniso, jmax)
    spec = EnsembleSpec(grid, "lp-bands", count=trials, seed=seed, shape="aniso-ball",
                        radius=2.0 ** (jmax - 1), aniso=aniso, level=0, jmax=jmax)
    all_bands = generate_bands(spec, family, threads)
    Rbase = 2.0 ** aniso.array
    A = 2.0 ** max(aniso.weights)

    def one(i: int) -> RatioTrial:
        bands = all_bands[i]
        t = seq_npp_ratio(bands, p, r, Rbase, A, q, trial=i)
        single = seq_npp_ratio(bands[:1], p, r, Rbase, A, q)
        direct = mixed_npp_ratio(bands[0], p, r, (A,) * n)
        t.extra["collapse_gap"] = max(
            abs(single.lhs - direct.lhs) / direct.lhs, abs(single.rhs_norm - direct.rhs_norm) / direct.rhs_norm
        )
        return t

    results = map_trials(one, trials, threads)
    report = VerificationReport(
        "seq-npp",
        {"a": list(aniso.weights), "p": _cfg_exps(p), "r": _cfg_exps(r), "q": q, "jmax": jmax, "trials": trials,
         "seed": seed, "Rbase": list(Rbase), "A": A, "grid": list(grid.samples)},
        results,
    )
    report.checks["single_term_collapse"] = all(t.extra["collapse_gap"] <= 1e-10 for t in results)
    report.checks["c_emp_finite"] = math.isfinite(report.c_emp)
    return report


# -- Sobolev embeddings -----------------------------------------------------------


def balance_gate(aniso: Anisotropy, s: float, t: float, p, r, deltas: Sequence[float]) -> bool:
    """Perturb ``s`` by each delta; rejection must happen exactly when the
    computed balance gap exceeds the tolerance."""
    for d in deltas:
        left, right = balance_gap(aniso, s + d, t, p, r)
        try:
            check_sobolev_params(aniso, s + d, t, p, r)
            rejected = False
        except BalanceError:
            rejected = True
        if rejected != (abs(left - right) > BALANCE_TOL):
            return False
    return True


def sobolev_suite(aniso, s: float, t: float, p, r, q, trials: int = 100, seed: int = 0,
                  dilations: int = 4, space: str = "F", threads: int | None = None) -> VerificationReport:
    """``||u||_{F^t_{r,q}} / ||u||_{F^s_{p,inf}}`` over random fields whose
    spectra fill the anisotropic balls ``|xi|_a <= 2**m``, ``m < dilations``."""
    aniso = aniso if isinstance(aniso, Anisotropy) else Anisotropy(aniso)
    n = aniso.ndim
    p, r = _exps(p, n), _exps(r, n)
    q = parse_exponent(q)
    jmax = dilations
    grid = grid_for_levels(aniso, jmax)
    family = build_family(grid, aniso, jmax)
    base = EnsembleSpec(grid, "random-rect", count=trials, seed=seed, shape="aniso-ball", radius=1.0, aniso=aniso)
    results: list[RatioTrial] = []
    per_level = {}
    for m, spec in enumerate(dilated_specs(base, range(dilations))):
        spec_m = EnsembleSpec(grid, spec.kind, count=trials, seed=seed + m, shape=spec.shape,
                              radius=spec.radius, aniso=aniso)
        bands_list = generate_bands(spec_m, family, threads)

        def one(i: int, bands_list=bands_list, m=m) -> RatioTrial:
            tr = sobolev_ratio(None, family, s, t, p, r, q, space=space, trial=m * trials + i, bands=bands_list[i])
            tr.extra["dilation"] = m
            return tr

        level = map_trials(one, trials, threads)
        per_level[m] = empirical_constant(level)
        results.extend(level)
    report = VerificationReport(
        "sobolev",
        {"a": list(aniso.weights), "s": s, "t": t, "p": _cfg_exps(p), "r": _cfg_exps(r), "q": q, "space": space,
         "trials": trials, "seed": seed, "dilations": dilations, "grid": list(grid.samples)},
        results,
        details={"c_emp_per_dilation": [per_level[m] for m in sorted(per_level)]},
    )
    report.checks["c_emp_finite"] = all(math.isfinite(v) for v in per_level.values())
    report.checks["balance_gate"] = balance_gate(
        aniso, s, t, p, r, [0.0, 4e-13, -4e-13, 3e-12, -3e-12, 1e-9, 0.25]
    )
    return report


# -- sequence-space interpolation and quasi-norm subadditivity ----------------------------


def interpolation_suite(seed: int = 0, sweep: int = 200, max_len: int = 12, seeds: Sequence[int] = (0, 1, 2)
                 ) -> VerificationReport:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(sweep):
        s1 = rng.uniform(-3, 2)
        s0 = s1 + rng.uniform(0.05, 3)
        theta = rng.uniform(0.05, 0.95)
        q = [0.5, 1.0, 2.0, 3.0, math.inf][rng.integers(5)]
        base = rng.uniform(1.1, 6.0)
        m = int(rng.integers(0, 12))
        c = complex(*rng.normal(size=2)) * 10 ** rng.uniform(-3, 3)
        seq = np.zeros(m + 1 + int(rng.integers(0, 4)), dtype=complex)
        seq[m] = c
        worst = max(worst, abs(interpolation_ratio(seq, s0, s1, theta, q, base).ratio - 1.0))
    searches = [binary_sequence_search(max_len, 1.0, -1.0, 0.5, 1.0, 2.0, seed=sd) for sd in seeds]
    cs = [c for c, _ in searches]
    report = VerificationReport(
        "lemma1",
        {"sweep": sweep, "max_len": max_len, "seeds": list(seeds), "s0": 1.0, "s1": -1.0, "theta": 0.5, "q": 1.0,
         "base": 2.0},
        details={"single_term_max_dev": worst, "c_emp_search": cs, "maximiser": list(searches[0][1])},
    )
    report.checks["single_term_ratio_one"] = worst <= 1e-12
    report.checks["search_deterministic"] = len(set(cs)) == 1 and len({a for _, a in searches}) == 1
    report.checks["search_finite"] = all(math.isfinite(c) for c in cs)
    return report


SUBADD_EXPONENTS = (1 / 3, 1 / 2, 1.0, 2.0, math.inf)


def subadditivity_suite(pairs: int = 10_000, seed: int = 0, ndim: int = 2, exponents=SUBADD_EXPONENTS,
                        chunk: int = 2500) -> VerificationReport:
    """``||f+g||**lam <= ||f||**lam + ||g||**lam`` for every ``p`` in
    ``exponents**ndim`` on random trigonometric polynomial pairs."""
    grid = GridSpec.cube(ndim, 16)
    mask = support_mask(EnsembleSpec(grid, rect=(3.0,) * ndim, count=1))
    cell = [L / N for L, N in zip(grid.periods, grid.samples)]
    configs = list(itertools.product(exponents, repeat=ndim))
    violations = {c: 0 for c in configs}
    worst = {c: -math.inf for c in configs}
    for start in range(0, pairs, chunk):
        stop = min(start + chunk, pairs)
        f = np.empty((stop - start,) + grid.shape, dtype=complex)
        g = np.empty_like(f)
        for b, trial in enumerate(range(start, stop)):
            rng = trial_rng(seed, trial)
            shape = (2,) + grid.shape
            z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            z = np.where(mask, z, 0)
            z[1] *= 10 ** rng.uniform(-2, 2)
            f[b] = field_from_centred(grid, z[0]).values
            g[b] = field_from_centred(grid, z[1]).values
        af, ag, afg = np.abs(f), np.abs(g), np.abs(f + g)
        for c in configs:
            lam = min(1.0, *c)
            lhs = mixed_lp_norm_batch(afg, c, cell) ** lam
            rhs = mixed_lp_norm_batch(af, c, cell) ** lam + mixed_lp_norm_batch(ag, c, cell) ** lam
            violations[c] += int(np.sum(lhs > rhs * (1 + 1e-10)))
            worst[c] = max(worst[c], float(np.max(lhs / rhs)))
    key = lambda c: ",".join("inf" if math.isinf(v) else f"{v:.6g}" for v in c)
    report = VerificationReport(
        "subadd",
        {"pairs": pairs, "seed": seed, "ndim": ndim, "grid": list(grid.samples)},
        details={"violations": {key(c): v for c, v in violations.items()},
                 "max_lhs_over_rhs": {key(c): v for c, v in worst.items()}},
    )
    report.checks["no_violations"] = sum(violations.values()) == 0
    return report


# -- simple embeddings between B and F ---------------------------------------------


def embedding_suite(fields: int = 1000, seed: int = 0, aniso=(1.0, 1.0), p=(1.0, 2.0),
                    qs=(0.5, 1.0, 2.0, math.inf), ss=(-1.0, 0.0, 0.5, 1.0, 2.0), jmax: int = 3,
                    threads: int | None = None) -> VerificationReport:
    """q- and s-monotonicity of both scales, and ``F_{p,p} = B_{p,p}``."""
    aniso = aniso if isinstance(aniso, Anisotropy) else Anisotropy(aniso)
    p = _exps(p, aniso.ndim)
    grid = grid_for_levels(aniso, jmax)
    family = build_family(grid, aniso, jmax)
    spec = EnsembleSpec(grid, "random-rect", count=fields, seed=seed, shape="aniso-ball",
                        radius=2.0 ** (jmax - 1), aniso=aniso)
    slack = 1e-12
    pp = next(iter(set(p.p))) if len(set(p.p)) == 1 else None

    def one(i: int):
        bands = generate_bands(dataclasses.replace(spec, count=1, seed=seed * 1_000_003 + i), family, threads=1)[0]
        qv = sv = 0
        for fam in ("B", "F"):
            for s in ss:
                vals = [_norm(bands, SpaceParams(s, aniso, p, q, fam)) for q in qs]
                qv += sum(1 for a, b in zip(vals, vals[1:]) if b > a * (1 + slack))
            for q in qs:
                vals = [_norm(bands, SpaceParams(s, aniso, p, q, fam)) for s in ss]
                sv += sum(1 for a, b in zip(vals, vals[1:]) if a > b * (1 + slack))
        uniform = MixedExponents((p.p[0],) * aniso.ndim)
        fb = triebel_norm(bands, SpaceParams(0.5, aniso, uniform, uniform.p[0], "F"))
        bb = besov_norm(bands, SpaceParams(0.5, aniso, uniform, uniform.p[0], "B"))
        eq = abs(fb - bb) / bb
        return qv, sv, eq

    out = map_trials(one, fields, threads)
    qv = sum(o[0] for o in out)
    sv = sum(o[1] for o in out)
    eq = max(o[2] for o in out)
    report = VerificationReport(
        "embeddings",
        {"fields": fields, "seed": seed, "a": list(aniso.weights), "p": _cfg_exps(p), "qs": list(qs), "ss": list(ss),
         "jmax": jmax},
        details={"q_violations": qv, "s_violations": sv, "F_pp_vs_B_pp_rel": eq},
    )
    report.checks["q_monotone"] = qv == 0
    report.checks["s_monotone"] = sv == 0
    report.checks["F_pp_equals_B_pp"] = eq <= 1e-10
    return report


def _norm(bands, params: SpaceParams) -> float:
    return besov_norm(bands, params) if params.family == "B" else triebel_norm(bands, params)


# -- scaling of the constant with the support radius ----------------------------------


def scaling_sweep(n: int, p, r, R_list: Sequence[float], trials: int = 100, seed: int = 0,
                  kinds: Sequence[str] = ("dirichlet", "gaussian-bump", "random-rect"),
                  slope_tol: float = SLOPE_TOL, grid: GridSpec | None = None,
                  threads: int | None = None) -> VerificationReport:
    """Fit ``log2 max ||f||_r/||f||_p`` against ``log2 R``; the slope should be
    ``n/p - n/r``.  The ensemble at each radius is the union of ``kinds``."""
    R_list = [float(x) for x in R_list]
    if len(R_list) < 3:
        raise ValueError("a sweep needs at least three radii")
    p, r = parse_exponent(p), parse_exponent(r)
    grid = grid or grid_for_support([max(R_list)] * n)
    results: list[RatioTrial] = []
    c_by_R = []
    for R in R_list:
        level = []
        for kind in kinds:
            spec = EnsembleSpec(grid, kind, count=trials, seed=seed, shape="ball", radius=R)
            fields = generate(spec, threads)

            def one(i: int, fields=fields, kind=kind) -> RatioTrial:
                f = fields[i]
                lhs = mixed_lp_norm(f, (r,) * n)
                rhs = mixed_lp_norm(f, (p,) * n)
                tr = RatioTrial(i, lhs, 1.0, rhs, lhs / rhs if rhs > 0 else math.inf)
                tr.extra.update(R=R, kind=kind)
                return tr

            level.extend(map_trials(one, trials, threads))
        c = empirical_constant(level)
        for tr in level:
            tr.extra["c_emp"] = c
        c_by_R.append(c)
        results.extend(level)
    for i, tr in enumerate(results):
        tr.trial = i
    fit = fit_loglog_slope(R_list, c_by_R)
    predicted = n * ((0 if math.isinf(p) else 1 / p) - (0 if math.isinf(r) else 1 / r))
    report = VerificationReport(
        "sweep",
        {"n": n, "p": p, "r": r, "R_list": R_list, "trials": trials, "seed": seed, "kinds": list(kinds),
         "grid": list(grid.samples)},
        results,
        fit=fit,
        predicted_slope=predicted,
        slope_tol=slope_tol,
        details={"c_emp_by_R": c_by_R},
    )
    return report


def run_all(seed: int = 0, trials: int = 100, threads: int | None = None) -> VerificationReport:
    """Every family at its default configuration."""
    fams = {
        "npp": npp_suite(1, 1, math.inf, 8, trials, seed, threads=threads),
        "mixed-npp": mixed_npp_suite((1, 2), (2, math.inf), (4, 8), trials, seed, threads=threads),
        "seq-npp": seq_npp_suite((1, 2), (1, 1), (2, 3), 2, trials, seed, threads=threads),
        "sobolev": sobolev_suite((1, 1), 1.0, 0.0, (1, 1), (2, 2), 2, trials, seed, threads=threads),
        "lemma1": interpolation_suite(seed),
        "subadd": subadditivity_suite(min(10_000, 100 * trials), seed),
    }
    return VerificationReport("all", {"seed": seed, "trials": trials}, families=fams)

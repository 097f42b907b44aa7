import math

import numpy as np
import pytest

from anisolp import GridSpec, to_spectrum
from anisolp.anisotropy import Anisotropy
from anisolp.grid import SampledField
from anisolp.littlewood_paley import build_family, decompose
from anisolp.mixed_norm import mixed_lp_norm
from anisolp.space_norms import SpaceParams, besov_norm, bfb_embedding_check, space_norm, triebel_norm
from anisolp.verifier.ensemble import EnsembleSpec, generate, generate_bands

INF = math.inf
A11 = Anisotropy([1, 1])


def zero_like(f):
    return SampledField(f.spec, np.zeros(f.spec.shape))


@pytest.fixture(scope="module")
def ensemble():
    spec = GridSpec([64, 64])
    fam = build_family(spec, A11, 3)
    ens = EnsembleSpec(spec, "random-rect", count=20, seed=5, shape="ball", radius=4.0)
    return spec, fam, generate_bands(ens, fam)


def test_params_validation():
    with pytest.raises(ValueError, match="p_k < inf"):
        SpaceParams(0, A11, (2, INF), 2, "F")
    SpaceParams(0, A11, (2, INF), 2, "B")
    with pytest.raises(ValueError):
        SpaceParams(0, A11, (2,), 2, "B")
    with pytest.raises(ValueError):
        SpaceParams(0, A11, (2, 2), 2, "X")
    assert SpaceParams(0, A11, "1,2", "inf", "f").q == INF


def test_single_band_zero(ensemble):
    _, _, all_bands = ensemble
    u0 = all_bands[0][0]
    bands = [u0] + [zero_like(u0)] * 3
    p = (1, 2)
    n0 = mixed_lp_norm(u0, p)
    for s in (-1, 0, 2.5):
        for q in (0.5, 1, INF):
            assert besov_norm(bands, SpaceParams(s, A11, p, q, "B")) == pytest.approx(n0, rel=1e-14)
            assert triebel_norm(bands, SpaceParams(s, A11, p, q, "F")) == pytest.approx(n0, rel=1e-14)


def test_single_band_three(ensemble):
    _, _, all_bands = ensemble
    u3 = all_bands[1][3]
    z = zero_like(u3)
    bands = [z, z, z, u3]
    ref = 2.0**6 * mixed_lp_norm(u3, (1, 2))
    assert besov_norm(bands, SpaceParams(2, A11, (1, 2), INF, "B")) == pytest.approx(ref, rel=1e-14)
    assert triebel_norm(bands, SpaceParams(2, A11, (1, 2), 0.7, "F")) == pytest.approx(ref, rel=1e-13)


def test_p_one_q_one_additivity():
    # at p = (1, 1), q = 1 inner and outer sums commute
    spec = GridSpec([32, 32])
    rng = np.random.default_rng(1)
    bands = []
    for j in range(3):
        v = np.zeros(spec.shape)
        v[10 * j: 10 * j + 5, :] = rng.uniform(0.5, 2, (5, 32))
        bands.append(SampledField(spec, v))
    fv = triebel_norm(bands, SpaceParams(0.7, A11, (1, 1), 1, "F"))
    bv = besov_norm(bands, SpaceParams(0.7, A11, (1, 1), 1, "B"))
    assert fv == pytest.approx(bv, rel=1e-13)


def test_parseval_oracle():
    spec = GridSpec([64, 64])
    fam = build_family(spec, A11, 3)
    u = generate(EnsembleSpec(spec, "random-rect", count=1, seed=2, shape="ball", radius=4.0))[0]
    bands = decompose(u, fam)
    c = to_spectrum(u)
    oracle = math.sqrt(spec.volume * sum(np.sum(np.abs(w * c) ** 2) for w in fam.windows))
    value = triebel_norm(bands, SpaceParams(0, A11, (2, 2), 2, "F"))
    assert value == pytest.approx(oracle, rel=1e-8)
    # windows are not an orthogonal split, so the L2 norm is only an upper bound
    assert value <= mixed_lp_norm(u, (2, 2)) * (1 + 1e-12)


def test_q_monotone_two_band(ensemble):
    _, _, all_bands = ensemble
    bands = all_bands[2]
    for fam in ("B", "F"):
        n1 = space_norm(bands, SpaceParams(0.5, A11, (1, 2), 1, fam))
        ninf = space_norm(bands, SpaceParams(0.5, A11, (1, 2), INF, fam))
        assert n1 >= ninf


def test_quasi_triangle(ensemble):
    _, _, all_bands = ensemble
    for fam, p, q in [("B", (0.5, 2), 1), ("F", (1, 3), 0.5), ("F", (2, 2), INF)]:
        params = SpaceParams(1.0, A11, p, q, fam)
        lam = min(1.0, q, *p)
        for f, g in zip(all_bands[::2], all_bands[1::2]):
            fg = [a + b for a, b in zip(f, g)]
            lhs = space_norm(fg, params) ** lam
            rhs = space_norm(f, params) ** lam + space_norm(g, params) ** lam
            assert lhs <= rhs * (1 + 1e-10)


def test_bfb_single_band(ensemble):
    _, _, all_bands = ensemble
    u = all_bands[3][1]
    z = zero_like(u)
    for rep in bfb_embedding_check([z, u, z, z], 1.0, A11, (1, 2), [0.5, 2, INF]):
        assert rep.lower_ratio == pytest.approx(1.0) and rep.upper_ratio == pytest.approx(1.0)


def test_bfb_equal_exponents(ensemble):
    _, _, all_bands = ensemble
    rep = bfb_embedding_check(all_bands[4], 0.5, A11, (1.5, 1.5), 1.5)[0]
    assert rep.triebel == pytest.approx(rep.besov_min, rel=1e-10)
    assert rep.triebel == pytest.approx(rep.besov_max, rel=1e-10)


def test_bfb_ensemble_finite():
    spec = GridSpec([64, 64])
    fam = build_family(spec, A11, 3)
    ens = EnsembleSpec(spec, "random-rect", count=100, seed=0xB5D, shape="ball", radius=4.0)
    worst = max(bfb_embedding_check(b, 0.0, A11, (1, 2), [2])[0].lower_ratio for b in generate_bands(ens, fam))
    assert math.isfinite(worst) and worst > 0


def test_f_rejects_infinite_p(ensemble):
    _, _, all_bands = ensemble
    with pytest.raises(ValueError):
        bfb_embedding_check(all_bands[0], 0, A11, (1, INF), [1])


def test_empty_bands_rejected():
    with pytest.raises(ValueError):
        besov_norm([], SpaceParams(0, A11, (1, 1), 1, "B"))

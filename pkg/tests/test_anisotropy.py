import itertools
import math

import numpy as np
import pytest

from anisolp import kernels
from anisolp.anisotropy import (
    Anisotropy,
    aniso_dilate,
    aniso_distance,
    aniso_distance_many,
    supporting_function_corners,
    supporting_function_rect,
)


def test_weights_validated():
    with pytest.raises(ValueError):
        Anisotropy([1.0, 0.5])
    assert Anisotropy.isotropic(3).weights == (1.0, 1.0, 1.0)
    assert Anisotropy([1, 2]).total == 3.0


class TestDilation:
    def test_identity(self):
        np.testing.assert_array_equal(aniso_dilate(1.0, (1, 2), [3.0, -2.0]), [3.0, -2.0])

    def test_examples(self):
        np.testing.assert_allclose(aniso_dilate(4.0, (1, 2), [1, 1]), [4, 16])
        np.testing.assert_allclose(aniso_dilate(2.0, (1, 3), [3, -5]), [6, -40])

    def test_negative_t(self):
        with pytest.raises(ValueError):
            aniso_dilate(-1.0, (1, 1), [1, 1])


class TestDistance:
    def test_examples(self):
        assert aniso_distance([3, 4], (1, 1)) == pytest.approx(5.0, rel=1e-15)
        assert aniso_distance([0, 9], (1, 2)) == pytest.approx(3.0, rel=1e-15)
        expected = math.sqrt((9 + math.sqrt(145)) / 2)
        assert aniso_distance([3, 4], (1, 2)) == pytest.approx(expected, rel=1e-14)

    def test_zero_and_tiny(self):
        assert aniso_distance([0, 0], (1, 2)) == 0.0
        assert aniso_distance([1e-301, 0], (1, 2)) == 0.0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            aniso_distance([np.nan, 1], (1, 1))

    def test_extreme_magnitudes(self):
        # on an axis the distance is |x_k|^(1/a_k)
        assert aniso_distance([1e-200, 0.0], (1, 2.5)) == pytest.approx(1e-200, rel=1e-13)
        assert aniso_distance([0.0, 1e150], (1, 2.5)) == pytest.approx(1e60, rel=1e-13)
        t = aniso_distance([1e200, 1e-5], (1, 2.5))
        assert t == pytest.approx(1e200, rel=1e-13)

    @pytest.mark.parametrize("a", [(1, 1), (1, 2), (1, 1.5, 3)])
    def test_properties(self, a):
        rng = np.random.default_rng(sum(a).__hash__())
        n = len(a)
        w = np.array(a)
        x = rng.standard_normal((2000, n)) * 10.0 ** rng.uniform(-3, 3, (2000, 1))
        y = rng.standard_normal((2000, n)) * 10.0 ** rng.uniform(-3, 3, (2000, 1))
        t = 10.0 ** rng.uniform(-2, 2, 2000)
        dx = aniso_distance_many(x, a)
        dy = aniso_distance_many(y, a)
        # defining residual
        res = np.sum(x**2 / dx[:, None] ** (2 * w), axis=1) - 1
        assert np.abs(res).max() < 1e-10
        # homogeneity
        dtx = aniso_distance_many(t[:, None] ** w * x, a)
        assert np.max(np.abs(dtx - t * dx) / (t * dx)) < 1e-10
        # triangle
        dxy = aniso_distance_many(x + y, a)
        assert np.all(dxy <= (dx + dy) * (1 + 1e-10))
        # sandwich |x_k| <= |x|_a^{a_k}, |x|_a <= sum |x_k|^{1/a_k}
        assert np.all(np.abs(x) <= dx[:, None] ** w * (1 + 1e-10))
        assert np.all(dx <= np.sum(np.abs(x) ** (1 / w), axis=1) * (1 + 1e-10))

    def test_isotropic_is_euclidean(self):
        x = np.random.default_rng(4).standard_normal((5000, 3)) * 7
        np.testing.assert_allclose(aniso_distance_many(x, (1, 1, 1)), np.linalg.norm(x, axis=1), rtol=1e-12)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled extension not built")
def test_backends_agree():
    rng = np.random.default_rng(8)
    x = rng.standard_normal((3000, 3)) * 10.0 ** rng.uniform(-5, 5, (3000, 1))
    x[0] = 0
    a = np.array([1.0, 1.7, 3.0])
    np.testing.assert_allclose(kernels.compiled.aniso_distance_many(x, a),
                               kernels.python.aniso_distance_many(x, a), rtol=1e-13)


class TestSupportingFunction:
    def test_examples(self):
        assert supporting_function_rect((1, 2), (1, 1)) == 3
        assert supporting_function_rect((1, 2), (0, 0)) == 0
        assert supporting_function_rect((1, 1, 1), (1, -2, 3)) == 6

    def test_matches_corners(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            R = rng.uniform(0.1, 5, 3)
            y = rng.standard_normal(3)
            assert supporting_function_rect(R, y) == pytest.approx(supporting_function_corners(R, y))
            corners = itertools.product(*[(-r, r) for r in R])
            assert supporting_function_rect(R, y) == pytest.approx(max(np.dot(c, y) for c in corners))

    def test_nonpositive_R(self):
        with pytest.raises(ValueError):
            supporting_function_rect((1, 0), (1, 1))

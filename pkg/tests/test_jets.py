"""Truncated Taylor jets and the jet curvature pipeline.

Oracles are closed forms: polynomial expansions, the round sphere and
hyperbolic ball in conformal charts (sectional curvature +1 / -1), and the
flat plane in polar coordinates.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sasakicheck import jets
from sasakicheck.derived import kulkarni
from sasakicheck.manifolds import MetricChart, chart_geometry
from sasakicheck.tensor import SingularMetricError


class ConformallyFlat(MetricChart):
    """g = 4 / (1 + k|x|^2)^2 * delta: constant sectional curvature k."""

    name = "conformal-ball"

    def __init__(self, n, k):
        self.n, self.k = n, k

    def metric(self, x):
        r2 = jets.einsum("a,a->", x, x)
        f = (r2 * self.k + 1.0).reciprocal() ** 2 * 4.0
        return jets.einsum(",ab->ab", f, x.space.constant(np.eye(self.n)))


class Polar(MetricChart):
    """Flat plane in polar coordinates (r, theta): g = dr^2 + r^2 dtheta^2."""

    name = "polar"
    n = 2

    def metric(self, x):
        r = x[0]
        zero = x.space.constant(0.0)
        one = x.space.constant(1.0)
        return jets.stack([jets.stack([one, zero]), jets.stack([zero, r * r])])


class TestMultiIndices:
    def test_size_is_binomial(self):
        sp = jets.space(7, 4)
        assert sp.size == math.comb(7 + 4, 4)

    def test_graded_prefix(self):
        """Lower-order coefficients are a prefix of higher-order ones."""
        hi, lo = jets.space(3, 4), jets.space(3, 2)
        assert hi.alphas[: lo.size] == lo.alphas


class TestArithmetic:
    def test_geometric_series(self):
        sp = jets.space(1, 4)
        x = sp.variables([0.0])[0]
        inv = (1.0 - x).reciprocal()
        assert np.allclose(inv.data, np.ones(5))

    def test_alternating_series(self):
        sp = jets.space(1, 4)
        x = sp.variables([0.0])[0]
        inv = (x + 1.0).reciprocal()
        assert np.allclose(inv.data, [(-1) ** k for k in range(5)])

    def test_binomial_expansion(self):
        """(1 + x + y)^3: coefficient of x^i y^j is 3!/(i! j! (3-i-j)!)."""
        sp = jets.space(2, 3)
        x = sp.variables([0.0, 0.0])
        p = (x[0] + x[1] + 1.0) ** 3
        for (i, j) in [(0, 0), (1, 0), (1, 1), (2, 1), (0, 3)]:
            expected = math.factorial(3) / (math.factorial(i) * math.factorial(j) * math.factorial(3 - i - j))
            assert p.coeff((i, j)) == pytest.approx(expected)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=3, max_size=3),
           st.lists(st.floats(-3, 3), min_size=3, max_size=3),
           st.floats(-2, 2))
    def test_product_matches_polynomial_multiplication(self, a, b, x0):
        """Univariate products agree with coefficient convolution up to the truncation order."""
        sp = jets.space(1, 4)
        t = sp.variables([x0])[0] - x0
        pa = sum(c * t ** k for k, c in enumerate(a))
        pb = sum(c * t ** k for k, c in enumerate(b))
        expected = np.zeros(5)
        full = np.convolve(a, b)[:5]
        expected[: len(full)] = full
        assert np.allclose((pa * pb).data, expected, atol=1e-9)

    @given(st.floats(-2, 2))
    def test_derivative_value(self, x0):
        """d^3/dx^3 of x^4 at x0 is 24 x0."""
        sp = jets.space(1, 4)
        x = sp.variables([x0])[0]
        assert (x ** 4).derivative_value((3,)) == pytest.approx(24 * x0, abs=1e-9)

    def test_partial_derivative_lowers_order(self):
        sp = jets.space(2, 3)
        x = sp.variables([0.5, -1.0])
        f = x[0] * x[0] * x[1]
        df = f.d(0)
        assert df.order == 2
        assert df.value == pytest.approx(2 * 0.5 * -1.0)
        assert df.derivative_value((0, 1)) == pytest.approx(2 * 0.5)

    def test_mixing_spaces_rejected(self):
        a = jets.space(2, 2).variables([0, 0])
        b = jets.space(2, 3).variables([0, 0])
        with pytest.raises(ValueError):
            a + b

    def test_reciprocal_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            jets.space(1, 2).variables([0.0])[0].reciprocal()

    def test_indexing_rejects_coefficient_axis(self):
        x = jets.space(2, 2).variables([0, 0])
        with pytest.raises(IndexError):
            x[0, 0]


class TestMatrixInverse:
    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 1000))
    def test_inverse_times_matrix_is_identity(self, seed):
        rng = np.random.default_rng(seed)
        sp = jets.space(3, 3)
        x = sp.variables(rng.uniform(-0.5, 0.5, 3))
        lin = rng.uniform(-0.2, 0.2, size=(3, 3, 3))
        a = jets.const_einsum("abk,k->ab", lin, x)
        g = a + a.transpose(1, 0) + sp.constant(np.eye(3) * 2.0)
        prod = jets.einsum("ab,bc->ac", g, jets.matrix_inverse(g))
        assert np.allclose(prod.data, sp.constant(np.eye(3)).data, atol=1e-12)

    def test_singular(self):
        sp = jets.space(2, 1)
        with pytest.raises(SingularMetricError):
            jets.matrix_inverse(sp.constant(np.zeros((2, 2))))


class TestCurvaturePipeline:
    @pytest.mark.parametrize("k", [1.0, -1.0])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_constant_curvature_chart(self, n, k):
        """R(X,Y)Z = k (g(Y,Z)X - g(X,Z)Y) at an off-centre point."""
        pt = np.linspace(0.1, 0.3, n)
        geom = chart_geometry(ConformallyFlat(n, k), pt, second_order=False)
        expected = k * kulkarni(geom.g.data, np.eye(n))
        assert np.allclose(geom.R.data, expected, atol=1e-10)
        assert geom.r == pytest.approx(k * n * (n - 1))
        # a symmetric space: nabla R = 0
        assert np.max(np.abs(geom.nabla_R.data)) < 1e-10

    def test_second_derivative_vanishes_on_space_form(self):
        geom = chart_geometry(ConformallyFlat(3, 1.0), [0.2, -0.1, 0.05], second_order=True)
        assert np.max(np.abs(geom.nabla2_R.data)) < 1e-9

    def test_polar_christoffel_symbols(self):
        """Gamma^r_thth = -r, Gamma^th_r th = 1/r; curvature zero."""
        sp = jets.space(2, 2)
        r0 = 1.7
        x = sp.variables([r0, 0.4])
        gam = jets.christoffel(Polar().metric(x))
        assert gam.value[0, 1, 1] == pytest.approx(-r0)
        assert gam.value[1, 0, 1] == pytest.approx(1 / r0)
        assert gam.value[1, 1, 0] == pytest.approx(1 / r0)
        assert np.allclose(jets.riemann(gam).value, 0.0, atol=1e-12)

    def test_covariant_derivative_of_metric_vanishes(self):
        sp = jets.space(3, 2)
        x = sp.variables([0.1, 0.2, -0.3])
        g = ConformallyFlat(3, 1.0).metric(x)
        dg = jets.covariant_derivative(g, 0, jets.christoffel(g))
        assert np.allclose(dg.value, 0.0, atol=1e-12)

"""Sasakian models: the Darboux chart, the closed-form space forms, frames and sampling."""

import numpy as np
import pytest

from sasakicheck.derived import kulkarni
from sasakicheck.manifolds import (
    BackendError,
    DarbouxModel,
    EuclideanChart,
    adapted_frame,
    chart_geometry,
    darboux_geometry,
    frame_components,
    horizontal_project,
    sample_vectors,
    space_form_geometry,
    structure_h,
)
from sasakicheck.sampling import sample_point, substream


@pytest.fixture(scope="module", params=[1, 2, 3])
def darboux(request):
    m = request.param
    return darboux_geometry(m, sample_point(7, 0, 2 * m + 1), second_order=False)


class TestDarbouxStructure:
    def test_phi_squared(self, darboux):
        n = darboux.n
        phi, xi, eta = darboux.phi.data, darboux.xi.data, darboux.eta.data
        assert np.allclose(phi @ phi, -np.eye(n) + np.outer(xi, eta), atol=1e-14)

    def test_eta_of_xi(self, darboux):
        assert float(darboux.eta.data @ darboux.xi.data) == pytest.approx(1.0)

    def test_metric_compatibility(self, darboux):
        g, phi, eta = darboux.g.data, darboux.phi.data, darboux.eta.data
        assert np.allclose(phi.T @ g @ phi, g - np.outer(eta, eta), atol=1e-14)

    def test_scalar_curvature(self, darboux):
        """The Darboux chart has phi-sectional curvature -3, where r = -(n - 1)."""
        n = darboux.n
        assert darboux.r == pytest.approx(-(n - 1))

    def test_h_vanishes(self, darboux):
        m = (darboux.n - 1) // 2
        assert np.allclose(structure_h(DarbouxModel(m), darboux.point).data, 0.0, atol=1e-14)


class TestSpaceForm:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_unit_sphere_curvature(self, m):
        """c = 1 is constant sectional curvature 1."""
        geom = space_form_geometry(m, 1.0)
        assert np.allclose(geom.R.data, kulkarni(geom.g.data, np.eye(geom.n)), atol=1e-14)
        assert np.allclose(geom.nabla_R.data, 0.0, atol=1e-14)

    @pytest.mark.parametrize("c", [-3.0, 0.0, 2.5])
    def test_phi_sectional_curvature(self, c):
        """K(X, phi X) = c for unit horizontal X."""
        geom = space_form_geometry(2, c)
        rng = substream(1, "phisec")
        for _ in range(5):
            X = horizontal_project(geom, rng.normal(size=geom.n))
            X /= np.sqrt(X @ geom.g.data @ X)
            Y = geom.phi.data @ X
            K = np.einsum("xyzw,x,y,z,w->", geom.R_flat.data, X, Y, Y, X)
            assert K == pytest.approx(c)

    def test_mixed_sectional_curvature_is_one(self):
        """Planes containing xi have sectional curvature 1."""
        geom = space_form_geometry(2, -3.0)
        X = np.zeros(geom.n)
        X[1] = 1.0
        X = horizontal_project(geom, X)
        X /= np.sqrt(X @ geom.g.data @ X)
        xi = geom.xi.data
        assert np.einsum("xyzw,x,y,z,w->", geom.R_flat.data, X, xi, xi, X) == pytest.approx(1.0)

    @pytest.mark.parametrize("c", [-3.0, 0.5, 4.0])
    @pytest.mark.parametrize("m", [1, 2])
    def test_eta_einstein_ricci(self, m, c):
        """S = ((m+1)c + 3m - 1)/2 g - (m+1)(c-1)/2 eta x eta."""
        geom = space_form_geometry(m, c)
        eta = geom.eta.data
        expected = ((m + 1) * c + 3 * m - 1) / 2 * geom.g.data - (m + 1) * (c - 1) / 2 * np.outer(eta, eta)
        assert np.allclose(geom.S.data, expected, atol=1e-13)

    def test_invalid_m(self):
        with pytest.raises(ValueError):
            space_form_geometry(0, 1.0)


class TestCrossBackend:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_darboux_matches_minus_three_form(self, m):
        ref = space_form_geometry(m, -3.0)
        for i in range(3):
            geom = darboux_geometry(m, sample_point(11, i, 2 * m + 1), second_order=False)
            F = adapted_frame(geom)
            assert np.allclose(frame_components(geom.R, F), ref.R.data, atol=1e-12)
            assert np.allclose(frame_components(geom.nabla_R, F), ref.nabla_R.data, atol=1e-12)
            assert np.allclose(frame_components(geom.S, F), ref.S.data, atol=1e-12)


class TestFrames:
    def test_adapted_frame_is_orthonormal(self, darboux):
        F = adapted_frame(darboux)
        assert np.allclose(F.T @ darboux.g.data @ F, np.eye(darboux.n), atol=1e-13)

    def test_adapted_frame_pairs_phi(self, darboux):
        F = adapted_frame(darboux)
        m = (darboux.n - 1) // 2
        assert np.allclose(darboux.phi.data @ F[:, 1 : m + 1], F[:, m + 1 :], atol=1e-13)
        assert np.allclose(F[:, 0], darboux.xi.data)


class TestSampling:
    def test_horizontal_vectors(self, darboux):
        vs = sample_vectors(darboux, "horizontal", substream(3, "h"), 10)
        assert np.max(np.abs(vs @ darboux.eta.data)) < 1e-15

    def test_unknown_class(self, darboux):
        with pytest.raises(ValueError):
            sample_vectors(darboux, "vertical", substream(3, "h"), 1)

    def test_substreams_are_order_independent(self):
        a = substream(42, "SAS-2.4", 5).uniform(size=4)
        substream(42, "other", 1).uniform(size=100)
        b = substream(42, "SAS-2.4", 5).uniform(size=4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, substream(42, "SAS-2.4", 6).uniform(size=4))


class TestBackendErrors:
    def test_structure_h_needs_contact_chart(self):
        with pytest.raises(BackendError):
            structure_h(EuclideanChart(3), np.zeros(3))

    def test_euclidean_chart_has_no_contact_fields(self):
        geom = chart_geometry(EuclideanChart(3), np.zeros(3), second_order=False)
        assert not geom.is_contact
        with pytest.raises(BackendError):
            adapted_frame(geom)

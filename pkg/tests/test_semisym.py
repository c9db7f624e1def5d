"""The derivation R(U,V)· and the second-derivative operators."""

import numpy as np
import pytest

from sasakicheck.manifolds import PolynomialChart, chart_geometry, darboux_geometry, horizontal_project, space_form_geometry
from sasakicheck.sampling import sample_point, substream
from sasakicheck.semisym import (
    curvature_endo,
    derive_tensor,
    literal_second_derivative_xi,
    phi2_apply,
    tensorial_second_derivative_xi,
)
from sasakicheck.tensor import Tensor, TensorError, contract, max_norm, tensor_product


def rand(n, key, k=1):
    return substream(5, key).uniform(-1, 1, size=(k, n))


@pytest.fixture(scope="module")
def generic():
    return chart_geometry(PolynomialChart(5, seed=9), np.full(5, -0.1), second_order=True)


class TestDerivation:
    def test_kills_metric(self, generic):
        U, V = rand(5, "uv", 2)
        assert max_norm(derive_tensor(generic, U, V, generic.g)) < 1e-12

    def test_kills_identity(self, generic):
        U, V = rand(5, "uv", 2)
        assert max_norm(derive_tensor(generic, U, V, Tensor(np.eye(5), 1, 1))) < 1e-12

    def test_vector_action(self, generic):
        U, V, X = rand(5, "uvx", 3)
        out = derive_tensor(generic, U, V, Tensor(X, 1, 0)).data
        assert np.allclose(out, curvature_endo(generic, U, V).data @ X)

    def test_leibniz_on_products(self, generic):
        U, V, a, b = rand(5, "leib", 4)
        A, B = Tensor(a, 1, 0), Tensor(b, 0, 1)
        lhs = derive_tensor(generic, U, V, tensor_product(A, B))
        rhs = tensor_product(derive_tensor(generic, U, V, A), B) + tensor_product(A, derive_tensor(generic, U, V, B))
        assert max_norm(lhs - rhs) < 1e-12

    def test_commutes_with_contraction(self, generic):
        U, V = rand(5, "cc", 2)
        lhs = contract(derive_tensor(generic, U, V, generic.R), 0, 0)
        rhs = derive_tensor(generic, U, V, contract(generic.R, 0, 0))
        assert max_norm(lhs - rhs) < 1e-12

    def test_ricci_identity(self, generic):
        """Commutator of second covariant derivatives = R(U,V)·R on a generic metric."""
        U, V = rand(5, "ri", 2)
        comm = np.einsum("auvxyz,u,v->axyz", generic.commutator.data, U, V)
        der = derive_tensor(generic, U, V, generic.R).data
        assert max_norm(comm - der) <= 1e-7 * (1 + max_norm(der))

    def test_zero_at_constant_curvature(self):
        geom = space_form_geometry(2, 1.0)
        U, V = rand(5, "cc1", 2)
        assert max_norm(derive_tensor(geom, U, V, geom.R)) < 1e-14


class TestPhi2:
    def test_projects_output(self):
        geom = space_form_geometry(2, -3.0)
        X = rand(5, "p2")[0]
        out = phi2_apply(geom, Tensor(X, 1, 0)).data
        assert np.allclose(out, -horizontal_project(geom, X))

    def test_needs_upper_slot(self):
        geom = space_form_geometry(1, 1.0)
        with pytest.raises(TensorError):
            phi2_apply(geom, geom.S)


class TestSecondDerivativeOperators:
    @pytest.mark.parametrize("m", [1, 2])
    def test_literal_operator_misses_one_term(self, m):
        """tensorial - literal = (nabla_V R)(X,Y) phi U for horizontal arguments."""
        n = 2 * m + 1
        geom = darboux_geometry(m, sample_point(3, 0, n), second_order=True)
        U, V, X, Y = horizontal_project(geom, rand(n, f"lit{m}", 4))
        diff = tensorial_second_derivative_xi(geom, U, V, X, Y) - literal_second_derivative_xi(geom, U, V, X, Y)
        term = np.einsum("awxyz,w,x,y,z->a", geom.nabla_R.data, V, X, Y, geom.phi.data @ U)
        assert np.allclose(diff, term, atol=1e-9)
        assert max_norm(term) > 1e-3  # the omitted term is genuinely nonzero here

    def test_literal_rejects_vertical_input(self):
        geom = space_form_geometry(1, -3.0)
        xi = geom.xi.data
        with pytest.raises(TensorError):
            literal_second_derivative_xi(geom, xi, xi, xi, xi)

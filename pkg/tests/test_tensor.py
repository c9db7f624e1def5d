"""Dense tensor algebra: valence bookkeeping, contraction, index gymnastics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sasakicheck.tensor import (
    SingularMetricError,
    Tensor,
    TensorError,
    antisymmetrize,
    apply,
    contract,
    identity,
    inverse_metric,
    inverse_permutation,
    lower_index,
    max_norm,
    permute,
    raise_index,
    tensor_product,
    vector,
    covector,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def spd(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    return Tensor(a @ a.T + n * np.eye(n), 0, 2)


class TestConstruction:
    def test_valence_and_rank(self):
        t = Tensor(np.zeros((3, 3, 3)), 1, 2)
        assert t.valence == (1, 2)
        assert t.rank == 3
        assert t.dim == 3

    def test_data_is_read_only(self):
        t = Tensor(np.zeros((2, 2)), 1, 1)
        with pytest.raises(ValueError):
            t.data[0, 0] = 1.0

    def test_axis_count_must_match_valence(self):
        with pytest.raises(TensorError):
            Tensor(np.zeros((3, 3)), 1, 2)

    def test_non_square_rejected(self):
        with pytest.raises(TensorError):
            Tensor(np.zeros((3, 2)), 1, 1)

    def test_adding_different_valence_rejected(self):
        with pytest.raises(TensorError):
            Tensor(np.zeros((2, 2)), 1, 1) + Tensor(np.zeros((2, 2)), 0, 2)


class TestContraction:
    def test_trace_of_identity_is_dimension(self):
        assert float(contract(identity(5), 0, 0).data) == 5.0

    def test_vector_covector_pairing(self):
        v, w = vector([1.0, 2.0, 3.0]), covector([4.0, -1.0, 0.5])
        assert float(contract(tensor_product(v, w), 0, 0).data) == pytest.approx(4 - 2 + 1.5)

    def test_slot_out_of_range(self):
        with pytest.raises(TensorError):
            contract(identity(3), 1, 0)

    def test_product_slot_order(self):
        """(a ⊗ b)^{ij}_{kl} = a^i_k b^j_l: uppers first, then lowers."""
        rng = np.random.default_rng(0)
        a, b = Tensor(rng.normal(size=(3, 3)), 1, 1), Tensor(rng.normal(size=(3, 3)), 1, 1)
        ab = tensor_product(a, b)
        assert np.allclose(ab.data, np.einsum("ik,jl->ijkl", a.data, b.data))


class TestPermutation:
    def test_mixing_kinds_rejected(self):
        with pytest.raises(TensorError):
            permute(Tensor(np.zeros((2, 2)), 1, 1), [1, 0])

    @given(st.permutations(range(5)))
    def test_inverse_permutation(self, perm):
        inv = inverse_permutation(perm)
        assert [perm[i] for i in inv] == list(range(5))

    def test_antisymmetrize_is_projection(self):
        rng = np.random.default_rng(1)
        t = Tensor(rng.normal(size=(4, 4, 4)), 1, 2)
        a = antisymmetrize(t, 1, 2)
        assert np.allclose(antisymmetrize(a, 1, 2).data, a.data)
        assert np.allclose(a.data, -np.swapaxes(a.data, 1, 2))


class TestMetric:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 10_000))
    def test_lower_then_raise_roundtrip(self, n, seed):
        g = spd(n, seed)
        ginv = inverse_metric(g)
        t = Tensor(np.random.default_rng(seed + 1).normal(size=(n, n, n)), 1, 2)
        back = raise_index(lower_index(t, 0, g, position=0), 0, ginv, position=0)
        assert max_norm(back - t) < 1e-9 * (1 + max_norm(t))

    def test_lower_index_default_goes_last(self):
        """Lowering R^a_xyz yields the (0,4) array R[x,y,z,a]."""
        rng = np.random.default_rng(2)
        g = spd(3, 3)
        R = Tensor(rng.normal(size=(3, 3, 3, 3)), 1, 3)
        low = lower_index(R, 0, g)
        assert np.allclose(low.data, np.einsum("axyz,aw->xyzw", R.data, g.data))

    def test_raise_index_position(self):
        g = spd(3, 4)
        S = Tensor(np.arange(9.0).reshape(3, 3), 0, 2)
        Q = raise_index(S, 0, inverse_metric(g), position=0)
        assert np.allclose(Q.data, np.linalg.inv(g.data) @ S.data)

    def test_singular_metric(self):
        with pytest.raises(SingularMetricError):
            inverse_metric(Tensor(np.diag([1.0, 1.0, 0.0]), 0, 2))

    def test_wrong_valence_metric(self):
        with pytest.raises(TensorError):
            lower_index(identity(3), 0, identity(3))


class TestApply:
    @given(arrays(float, 3, elements=finite), arrays(float, 3, elements=finite))
    def test_bilinear_form(self, x, y):
        g = spd(3, 7)
        assert apply(g, x, y) == pytest.approx(x @ g.data @ y, abs=1e-9)

    def test_max_norm(self):
        assert max_norm(np.array([[1.0, -3.0], [2.0, 0.0]])) == 3.0
        assert max_norm(np.zeros(0)) == 0.0

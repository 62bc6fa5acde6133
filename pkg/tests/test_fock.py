import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdeform.fock import (
    FockBasis, OperatorMatrix, ProductBasis, RepresentationError, StructureFunctionSpec, klein_operator,
    ladder_operators, lift, make_fock_space, masked_residual, number_operator, projector, projector_sum,
    q_bracket, structure_function_operator, unit_phase,
)

import oracles
from oracles import FROZEN


def fro(a):
    return float(np.linalg.norm(a))


class TestBasis:
    def test_levels_and_grading(self):
        b = make_fock_space(4, 2)
        assert b.dim == 4 and b.lam == 2
        assert b.levels[:, 0].tolist() == [0, 1, 2, 3]
        assert make_fock_space(16, 4).dim == 16

    @pytest.mark.parametrize("dim,lam,needle", [(1, 1, "dim"), (4, 0, "lambda"), (4, 5, "lambda")])
    def test_invalid(self, dim, lam, needle):
        with pytest.raises(ValueError, match=needle):
            make_fock_space(dim, lam)

    def test_product_basis_row_major(self):
        pb = ProductBasis((make_fock_space(3, 1), make_fock_space(2, 1)))
        assert pb.dim == 6
        assert pb.levels.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]]

    def test_product_basis_requires_common_lambda(self):
        with pytest.raises(ValueError):
            ProductBasis((make_fock_space(4, 2), make_fock_space(4, 4)))


class TestOperatorMatrix:
    def test_immutable_and_finite(self):
        b = make_fock_space(2, 1)
        m = OperatorMatrix(b, np.eye(2))
        with pytest.raises(ValueError):
            m.data[0, 0] = 3
        with pytest.raises(ValueError, match="non-finite"):
            OperatorMatrix(b, [[np.nan, 0], [0, 1]])
        with pytest.raises(ValueError, match="shape"):
            OperatorMatrix(b, np.eye(3))

    def test_arithmetic_checks_basis(self):
        a = number_operator(make_fock_space(3, 1))
        b = number_operator(make_fock_space(3, 3))
        with pytest.raises(ValueError):
            a @ b
        assert np.allclose((a @ a + a * 2 - a).diagonal(), [0, 2, 6])


class TestNumberProjectorKlein:
    def test_number(self):
        assert np.array_equal(number_operator(make_fock_space(3, 1)).data, oracles.number(3))
        assert number_operator(make_fock_space(5, 1)).data.trace().real == FROZEN["trace_N_d5"]

    @pytest.mark.parametrize("mu,diag", [(0, [1, 0, 1, 0]), (1, [0, 1, 0, 1])])
    def test_lambda2_projectors(self, mu, diag):
        assert np.array_equal(projector(make_fock_space(4, 2), mu).diagonal().real, diag)

    def test_lambda3_projector_from_sum(self):
        b = make_fock_space(6, 3)
        assert np.allclose(projector_sum(b, 2), FROZEN["lam3_d6_p2"], atol=1e-15)
        assert np.array_equal(projector(b, 2).data, oracles.projector_indicator(6, 3, 2))

    def test_projector_index_range(self):
        with pytest.raises(ValueError):
            projector(make_fock_space(4, 2), 2)

    @pytest.mark.parametrize("lam", [1, 2, 3, 5, 8, 16])
    def test_completeness_orthogonality(self, lam):
        b = make_fock_space(64, lam)
        ps = [projector(b, m).data for m in range(lam)]
        assert fro(sum(ps) - np.eye(64)) < 1e-13
        for m, pm in enumerate(ps):
            for n, pn in enumerate(ps):
                assert fro(pm @ pn - (pn if m == n else 0)) < 1e-13

    def test_klein_values(self):
        assert np.allclose(klein_operator(make_fock_space(4, 2)).diagonal(), [1, -1, 1, -1], atol=0)
        assert np.array_equal(klein_operator(make_fock_space(7, 1)).data, np.eye(7))
        assert np.array_equal(klein_operator(make_fock_space(4, 4)).diagonal(), [1, 1j, -1, -1j])
        assert np.allclose(klein_operator(make_fock_space(20, 5)).data, oracles.klein(20, 5), atol=1e-15)

    @pytest.mark.parametrize("lam", range(1, 17))
    def test_klein_periodic(self, lam):
        k = klein_operator(make_fock_space(max(lam, 16), lam)).data
        assert fro(np.linalg.matrix_power(k, lam) - np.eye(k.shape[0])) < 1e-12

    def test_unit_phase_exact_at_quarter_turns(self):
        assert unit_phase(0.25) == 1j and unit_phase(0.5) == -1 and unit_phase(-0.25) == -1j


class TestStructureFunction:
    def test_calogero_vasiliev_values(self):
        b = make_fock_space(4, 2)
        spec = StructureFunctionSpec((0.5, -0.5))
        assert np.allclose(structure_function_operator(b, spec).diagonal(), FROZEN["cv_half_F_d4"], atol=0)
        assert np.allclose(structure_function_operator(make_fock_space(3, 2), StructureFunctionSpec((0, 0))).diagonal(),
                           [0, 1, 2])

    def test_partial_sum_constraint(self):
        with pytest.raises(ValueError, match="beta_1"):
            StructureFunctionSpec((-1.5, 1.5))

    def test_sum_constraint(self):
        with pytest.raises(ValueError, match="sum"):
            StructureFunctionSpec((0.5, 0.5))

    def test_ladder_entries(self):
        lo, hi = ladder_operators(make_fock_space(4, 2), StructureFunctionSpec((0.5, -0.5)))
        assert np.allclose(np.diag(hi.data, -1), FROZEN["cv_half_raising_d4"], atol=0)
        assert np.array_equal(lo.data, hi.data.conj().T)
        vac = np.zeros(4)
        vac[0] = 1
        assert np.array_equal(lo.data @ vac, np.zeros(4))

    def test_undeformed_ladder(self):
        lo, hi = ladder_operators(make_fock_space(3, 2), StructureFunctionSpec.undeformed(2))
        assert np.allclose(np.diag(hi.data, -1), [1, math.sqrt(2)])
        prod = (lo @ hi).diagonal()
        assert np.allclose(prod[:2], [1, 2])

    def test_representation_failure(self):
        # a validated spec never yields F < 0, so force one past the constructor
        spec = StructureFunctionSpec((0.0, 0.0))
        object.__setattr__(spec, "alphas", (-3.0, 3.0))
        object.__setattr__(spec, "betas", (0.0, -3.0))
        with pytest.raises(RepresentationError):
            ladder_operators(make_fock_space(4, 2), spec)


def _random_alphas(rng, lam):
    while True:
        a = rng.uniform(-0.9, 2.0, lam - 1)
        alphas = np.append(a, -a.sum())
        if all(alphas[:m].sum() > -1 for m in range(1, lam)):
            return tuple(alphas)


class TestGdoaRelations:
    @pytest.mark.parametrize("lam", [2, 3, 4])
    def test_ladder_consistency_against_oracle(self, lam):
        rng = np.random.default_rng(lam)
        alphas = _random_alphas(rng, lam)
        b = make_fock_space(24, lam)
        spec = StructureFunctionSpec(alphas)
        lo, hi = ladder_operators(b, spec)
        olo, ohi = oracles.ladder(24, alphas)
        assert np.allclose(lo.data, olo, atol=1e-15)
        f = structure_function_operator(b, spec).data
        assert fro((hi @ lo).data - f) < 1e-12
        m = masked_residual((lo @ hi).data - np.diag(oracles.structure_values(25, alphas)[1:]), 1, basis=b)
        assert m.masked_norm < 1e-12
        for mu in range(lam):
            nxt = projector(b, (mu + 1) % lam).data
            assert fro(hi.data @ projector(b, mu).data - nxt @ hi.data) < 1e-12

    @pytest.mark.parametrize("kappa", [-0.9, -0.5, 0.0, 0.5, 2.0])
    def test_calogero_vasiliev(self, kappa):
        b = make_fock_space(32, 2)
        lo, hi = ladder_operators(b, StructureFunctionSpec.calogero_vasiliev(kappa))
        k = klein_operator(b)
        r1 = q_bracket(lo, hi, 1) - (b.identity() + k * kappa)
        assert masked_residual(r1, 1).masked_norm < 1e-12
        assert not np.any(q_bracket(k, hi, -1).data)


class TestQBracket:
    def test_examples(self):
        b = make_fock_space(2, 1)
        a = OperatorMatrix(b, np.diag([0, 1]))
        e = OperatorMatrix(b, [[0, 1], [0, 0]])
        assert np.array_equal(q_bracket(a, e, 1).data, -e.data)
        assert not np.any(q_bracket(e, e, 1).data)
        sx = OperatorMatrix(b, [[0, 1], [1, 0]])
        assert np.array_equal(q_bracket(sx, sx, -1).data, 2 * np.eye(2))

    @settings(max_examples=120, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32 - 1),
           st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
           st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
    def test_bilinear_and_antisymmetric(self, d, seed, s, q):
        rng = np.random.default_rng(seed)
        b = make_fock_space(d, 1)
        A, B, C = (OperatorMatrix(b, rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) for _ in range(3))
        lhs = q_bracket(A * s + C, B, q).data
        rhs = s * q_bracket(A, B, q).data + q_bracket(C, B, q).data
        assert np.allclose(lhs, rhs, atol=1e-9 * (1 + abs(s)) * (1 + abs(q)))
        lhs = q_bracket(A, B * s + C, q).data
        rhs = s * q_bracket(A, B, q).data + q_bracket(A, C, q).data
        assert np.allclose(lhs, rhs, atol=1e-9 * (1 + abs(s)) * (1 + abs(q)))
        assert np.allclose(q_bracket(A, B, 1).data, -q_bracket(B, A, 1).data, atol=1e-12)
        assert np.allclose(q_bracket(A, B, q).data, oracles.comm(A.data, B.data, q), atol=1e-10)


class TestMaskedResidual:
    def test_boson_edge(self):
        b = make_fock_space(4, 1)
        lo, hi = ladder_operators(b, StructureFunctionSpec.undeformed(1))
        r = q_bracket(lo, hi, 1) - b.identity()
        m0 = masked_residual(r, 0)
        assert m0.raw_norm == pytest.approx(FROZEN["boson_d4_heis_raw"], rel=1e-15)
        assert masked_residual(r, 1).masked_norm < 1e-14

    def test_zero_and_bounds(self):
        b = make_fock_space(4, 1)
        z = OperatorMatrix(b, np.zeros((4, 4)))
        m = masked_residual(z, 2)
        assert (m.raw_norm, m.masked_norm) == (0.0, 0.0)
        with pytest.raises(ValueError):
            masked_residual(z, 4)

    def test_exclusion(self):
        b = make_fock_space(4, 1)
        a = OperatorMatrix(b, np.diag([1.0, 2.0, 3.0, 4.0]))
        m = masked_residual(a, 1, exclude=np.array([False, True, False, False]))
        assert m.masked_norm == pytest.approx(math.sqrt(10)) and m.excluded == 1

    def test_product_basis_mask_per_mode(self):
        pb = ProductBasis((make_fock_space(3, 1), make_fock_space(3, 1)))
        keep = pb.keep(1)
        assert keep.sum() == 4


class TestLift:
    def test_tensor_embedding(self):
        b = make_fock_space(3, 1)
        pb = ProductBasis((b, b))
        lo, hi = ladder_operators(b, StructureFunctionSpec.undeformed(1))
        l1, h2 = lift(lo, pb, 0), lift(hi, pb, 1)
        assert np.array_equal(l1.data, oracles.kron_first(lo.data, 3))
        assert np.array_equal(h2.data, oracles.kron_second(hi.data, 3))
        assert not np.any(q_bracket(l1, h2, 1).data)

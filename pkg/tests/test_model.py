from fractions import Fraction

import pytest

from conftest import random_sl2, unit
from pqh.algebra import ParaQuaternion
from pqh.linalg import Mat, symmetric_signature
from pqh.model import (
    HBasisChange,
    ModelSpace,
    OP_I,
    OP_J,
    OP_K,
    Operator,
    StructureError,
    Vector,
    change_admissible_basis,
    is_admissible_triple,
    model_to_interleaved,
    operator_from_mat2,
    recover_omega_e,
    standard_symplectic,
    standardize,
    tensor,
)
from pqh.rng import Rng


class TestModelSpace:
    def test_dimension_is_multiple_of_four(self):
        ms = ModelSpace.standard(2)
        assert ms.dim_v == 8 and ms.dim_e == 4

    def test_rejects_non_symplectic(self):
        with pytest.raises(StructureError):
            ModelSpace(1, Mat(((0, 0), (0, 0))))
        with pytest.raises(StructureError):
            ModelSpace(1, Mat(((0, 1), (1, 0))))  # not skew

    def test_rejects_bad_size(self):
        with pytest.raises(StructureError):
            ModelSpace(2, standard_symplectic(2))


class TestOperatorAction:
    def test_standard_action_table(self, ms1):
        e = (1, 0)
        h1e = tensor((1, 0), e)
        h2e = tensor((0, 1), e)
        assert OP_I.apply(h1e) == h2e
        assert OP_I.apply(h2e) == h1e.scale(-1)
        assert OP_J.apply(h1e) == h2e
        assert OP_J.apply(h2e) == h1e
        assert OP_K.apply(h1e) == h1e.scale(-1)
        assert OP_K.apply(h2e) == h2e

    def test_i_plus_j_nilpotent_on_h2(self):
        x = tensor((0, 1), (3, Fraction(1, 2)))
        y = OP_I.apply(x) + OP_J.apply(x)
        assert y.is_zero()

    def test_square_identity_random(self):
        rng = Rng(21)
        for n in (1, 2, 3, 4):
            for _ in range(50):
                a = Operator(rng.rational(), rng.rational(), rng.rational())
                x = Vector.from_coords(rng.rationals(4 * n))
                scale = a.beta**2 + a.gamma**2 - a.alpha**2
                assert a.apply(a.apply(x)) == x.scale(scale)
                assert scale == -a.q()


class TestMetric:
    def test_decomposable_values(self, ms1):
        x = tensor((1, 0), (1, 0))
        y = tensor((0, 1), (0, 1))
        assert ms1.metric(x, y) == 1  # omega^H(h1,h2) * omega^E(e1,e2)
        assert ms1.metric(tensor((1, 0), (1, 0)), tensor((1, 0), (0, 1))) == 0
        assert ms1.metric(x, x) == 0  # decomposables are isotropic

    def test_structure_operators_are_skew(self, ms2):
        rng = Rng(22)
        for op in (OP_I, OP_J, OP_K):
            for _ in range(30):
                x = Vector.from_coords(rng.rationals(8))
                y = Vector.from_coords(rng.rationals(8))
                assert ms2.metric(op.apply(x), y) + ms2.metric(x, op.apply(y)) == 0

    def test_neutral_signature(self):
        for n in (1, 2, 3, 4):
            ms = ModelSpace.standard(n)
            assert symmetric_signature(ms.metric_matrix()) == (2 * n, 0, 2 * n)


class TestHermitianProduct:
    def test_example_one_minus_k(self, ms1):
        x = tensor((1, 0), (1, 0))
        y = tensor((0, 1), (0, 1))
        assert ms1.hermitian_product(x, y) == ParaQuaternion(1, 0, 0, -1)

    def test_isotropic_self_product(self, ms1):
        x = tensor((1, 0), (1, 0))
        assert ms1.hermitian_product(x, x).is_zero()

    def test_norm_im_invariance(self, ms1):
        x = tensor((1, 0), (1, 0))
        y = tensor((0, 1), (0, 1))
        base = ms1.hermitian_product(x, y).imag().norm()
        assert base == -1
        rng = Rng(23)
        for _ in range(20):
            s = random_sl2(rng)
            assert ms1.hermitian_product(x, y, s).imag().norm() == base

    def test_rejects_inadmissible_triple(self, ms1):
        x = tensor((1, 0), (1, 0))
        with pytest.raises(StructureError):
            ms1.hermitian_product(x, x, (OP_I, OP_I, OP_K))


class TestBasisChange:
    def test_identity(self):
        a = Operator(2, 3, Fraction(1, 2))
        assert change_admissible_basis(HBasisChange.identity(), a) == a

    def test_swap_sends_k_to_minus_k(self):
        s = HBasisChange(Mat(((0, -1), (1, 0))))  # (h1, h2) -> (h2, -h1)
        assert change_admissible_basis(s, OP_K) == Operator(0, 0, -1)

    def test_q_preserved_random(self):
        rng = Rng(24)
        for _ in range(100):
            s = random_sl2(rng)
            a = Operator(rng.rational(), rng.rational(), rng.rational())
            assert change_admissible_basis(s, a).q() == a.q()

    def test_non_unimodular_rejected(self):
        with pytest.raises(StructureError):
            HBasisChange(Mat(((2, 0), (0, 1))))

    def test_triple_is_admissible(self):
        rng = Rng(25)
        for _ in range(20):
            s = random_sl2(rng)
            i, j, k = s.triple()
            assert is_admissible_triple(i, j, k)


class TestStandardize:
    def _standard_triple(self, pairs):
        def blocks(b):
            d = 2 * pairs
            rows = [[Fraction(0)] * d for _ in range(d)]
            for p in range(pairs):
                for r in range(2):
                    for c in range(2):
                        rows[2 * p + r][2 * p + c] = Fraction(b[r][c])
            return Mat(rows)

        return (
            blocks(((0, -1), (1, 0))),
            blocks(((0, 1), (1, 0))),
            blocks(((-1, 0), (0, 1))),
        )

    def test_standard_input_gives_permutation_scale(self):
        i_m, j_m, k_m = self._standard_triple(2)
        std = standardize(i_m, j_m, k_m)
        assert std.pairs == 2
        binv = std.basis.inverse()
        assert binv @ i_m @ std.basis == i_m

    def test_conjugated_structure_recovered(self):
        rng = Rng(26)
        i_m, j_m, k_m = self._standard_triple(2)
        for _ in range(10):
            while True:
                p = Mat([rng.rationals(4) for _ in range(4)])
                if p.det() != 0:
                    break
            pi = p.inverse()
            std = standardize(p @ i_m @ pi, p @ j_m @ pi, p @ k_m @ pi)
            b = std.basis
            assert b.inverse() @ (p @ i_m @ pi) @ b == i_m
            assert b.inverse() @ (p @ j_m @ pi) @ b == j_m
            assert b.inverse() @ (p @ k_m @ pi) @ b == k_m

    def test_relation_violation_rejected(self):
        # J = Id has equal relations broken: no valid triple completes it
        d = 2
        eye = Mat.identity(d)
        with pytest.raises(StructureError):
            standardize(Mat(((0, -1), (1, 0))), eye, Mat(((-1, 0), (0, 1))))

    def test_model_interleave_permutation(self, ms2):
        p = model_to_interleaved(2)
        # permutation matrices are orthogonal
        assert p @ p.T == Mat.identity(8)
        # conjugating the model operators gives 2x2 blocks
        a = OP_I.as_matrix(4)
        blocked = p @ a @ p.T
        i_m, _, _ = TestStandardize()._standard_triple(4)
        assert blocked == i_m


class TestRecoverOmega:
    def test_round_trip(self, ms2):
        omega = recover_omega_e(ms2.metric, 4)
        assert omega == ms2.omega

    def test_round_trip_nonstandard(self):
        rows = [
            (0, 2, 1, 0),
            (-2, 0, 0, 0),
            (-1, 0, 0, 1),
            (0, 0, -1, 0),
        ]
        ms = ModelSpace(2, Mat(rows))
        assert recover_omega_e(ms.metric, 4) == ms.omega

    def test_non_hermitian_detected(self, ms1):
        def broken(x, y):
            # break the skewness of K: add a K-symmetric error term
            err = x.e_part[0] * y.e_part[0]
            return ms1.metric(x, y) + err

        with pytest.raises(StructureError):
            recover_omega_e(broken, 2)


def test_operator_from_mat2_round_trip():
    rng = Rng(27)
    for _ in range(50):
        a = Operator(rng.rational(), rng.rational(), rng.rational())
        assert operator_from_mat2(a.mat2()) == a

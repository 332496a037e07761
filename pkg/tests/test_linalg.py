from fractions import Fraction

import pytest

from pqh.linalg import Mat, symmetric_signature
from pqh.polyq import (
    factor,
    is_rational_square,
    minimal_polynomial,
    poly_divmod,
    poly_eval_matrix,
    poly_mul,
    rational_roots,
    squarefree_part,
)
from pqh.quadext import QuadExt, sqrt_of
from pqh.rng import Rng


def rand_mat(rng, r, c):
    return Mat([rng.rationals(c) for _ in range(r)])


class TestMat:
    def test_rref_canonical(self):
        rng = Rng(5)
        for _ in range(50):
            a = rand_mat(rng, 3, 5)
            r1, piv = a.rref()
            # re-reducing is idempotent and shuffled rows give the same form
            assert r1.rref()[0] == r1
            shuffled = Mat(a.rows[::-1])
            assert shuffled.rref()[0] == r1

    def test_kernel(self):
        rng = Rng(6)
        for _ in range(50):
            a = rand_mat(rng, 3, 6)
            k = a.kernel()
            assert k.nrows == 6 - a.rank()
            for row in k.rows:
                assert all(x == 0 for x in a.mul_vec(row))

    def test_inverse_and_det(self):
        rng = Rng(7)
        for _ in range(30):
            m = rand_mat(rng, 4, 4)
            if m.det() == 0:
                continue
            assert m @ m.inverse() == Mat.identity(4)
            assert m.inverse().det() * m.det() == 1

    def test_solve(self):
        a = Mat(((1, 2), (3, 4)))
        x = a.solve((5, 11))
        assert a.mul_vec(x) == (Fraction(5), Fraction(11))
        inconsistent = Mat(((1, 1), (2, 2))).solve((1, 3))
        assert inconsistent is None

    def test_charpoly_cayley_hamilton(self):
        rng = Rng(8)
        for _ in range(20):
            m = rand_mat(rng, 3, 3)
            cp = m.charpoly()
            assert cp[-1] == 1
            assert poly_eval_matrix(cp, m).is_zero()
            assert cp[0] == (-1) ** 3 * m.det()

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            Mat(((0.5, 1), (0, 1)))


class TestSignature:
    def test_diagonal(self):
        m = Mat(((2, 0, 0), (0, 0, 0), (0, 0, -3)))
        assert symmetric_signature(m) == (1, 1, 1)

    def test_hyperbolic_split(self):
        # zero diagonal, off-diagonal pair gives (1, 0, 1)
        m = Mat(((0, 1), (1, 0)))
        assert symmetric_signature(m) == (1, 0, 1)

    def test_mixed(self):
        m = Mat(((0, 1, 0), (1, 0, 0), (0, 0, 5)))
        assert symmetric_signature(m) == (2, 0, 1)

    def test_congruence_invariance(self):
        rng = Rng(9)
        for _ in range(40):
            m = rand_mat(rng, 4, 4)
            sym = m + m.T
            sig = symmetric_signature(sym)
            p = rand_mat(rng, 4, 4)
            if p.det() == 0:
                continue
            assert symmetric_signature(p.T @ sym @ p) == sig

    def test_non_symmetric_rejected(self):
        with pytest.raises(ValueError):
            symmetric_signature(Mat(((0, 1), (2, 0))))


class TestPoly:
    def test_factor_quadratics(self):
        # x^2 + 1 irreducible; x^2 - 1 splits
        one = Fraction(1)
        lead, fs = factor((one, Fraction(0), one))
        assert lead == 1 and fs == [((one, Fraction(0), one), 1)]
        lead, fs = factor((-one, Fraction(0), one))
        assert [f for f, _ in fs] == [(-one, one), (one, one)]

    def test_factor_random_products(self):
        rng = Rng(10)
        for _ in range(25):
            f = (rng.nonzero_rational(), Fraction(1))
            g = (rng.rational(), rng.rational(), Fraction(1))
            prod = poly_mul(poly_mul(f, f), g)
            lead, fs = factor(prod)
            rebuilt = (lead,)
            for fac, mult in fs:
                for _ in range(mult):
                    rebuilt = poly_mul(rebuilt, fac)
            assert rebuilt == prod

    def test_rational_roots(self):
        # (x - 2)(x + 1/3)(x^2 + 1)
        f = poly_mul(
            poly_mul((Fraction(-2), Fraction(1)), (Fraction(1, 3), Fraction(1))),
            (Fraction(1), Fraction(0), Fraction(1)),
        )
        assert rational_roots(f) == {Fraction(2), Fraction(-1, 3)}

    def test_squarefree(self):
        f = poly_mul((Fraction(-1), Fraction(1)), (Fraction(-1), Fraction(1)))
        assert squarefree_part(f) == (Fraction(-1), Fraction(1))

    def test_minimal_polynomial(self):
        # Jordan block with eigenvalue 2: minpoly (x-2)^2, charpoly (x-2)^2
        j = Mat(((2, 1), (0, 2)))
        assert minimal_polynomial(j) == (Fraction(4), Fraction(-4), Fraction(1))
        # diagonalizable: minpoly squarefree
        d = Mat(((2, 0), (0, 2)))
        assert minimal_polynomial(d) == (Fraction(-2), Fraction(1))

    def test_divmod(self):
        f = (Fraction(1), Fraction(2), Fraction(1))  # (x+1)^2
        q, r = poly_divmod(f, (Fraction(1), Fraction(1)))
        assert q == (Fraction(1), Fraction(1)) and r == ()

    def test_is_rational_square(self):
        assert is_rational_square(Fraction(9, 4)) == Fraction(3, 2)
        assert is_rational_square(Fraction(2)) is None
        assert is_rational_square(Fraction(-1)) is None
        assert is_rational_square(Fraction(0)) == 0


class TestQuadExt:
    def test_field_ops(self):
        r2 = sqrt_of(2)
        x = 1 + r2
        assert x * x == 3 + 2 * r2
        assert (x * x - 3) / 2 == r2
        y = x.inverse()
        assert x * y == 1
        assert r2 * r2 == 2

    def test_nonsquare_radicand_required(self):
        with pytest.raises(ValueError):
            QuadExt(Fraction(1), Fraction(1), Fraction(4))

    def test_linear_algebra_over_extension(self):
        r2 = sqrt_of(2)
        m = Mat(((QuadExt(Fraction(0), Fraction(0), Fraction(2)), 2 + 0 * r2),
                 (1 + 0 * r2, QuadExt(Fraction(0), Fraction(0), Fraction(2)))))
        # T = [[0,2],[1,0]]: kernel of T - sqrt(2) is spanned by (sqrt(2), 1)
        shifted = m - Mat.identity(2).scale(r2)
        k = shifted.kernel()
        assert k.nrows == 1
        v = k.rows[0]
        assert tuple(m.mul_vec(v)) == tuple(r2 * x for x in v)

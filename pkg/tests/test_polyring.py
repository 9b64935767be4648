import math

import numpy as np
import pytest

from semialg_moments.errors import ArgumentError, FormatError
from semialg_moments.polyring import Monomial, Polynomial, arith, compose, evaluate, mono_basis


def x(dim=2):
    return Polynomial.variables(dim)


def random_poly(rng, dim, degree):
    terms = {}
    for m in mono_basis(dim, degree):
        if rng.random() < 0.6:
            terms[m] = float(rng.integers(-5, 6))
    return Polynomial(dim, terms)


class TestMonoBasis:

    def test_small_bases(self):
        assert mono_basis(1, 2) == (Monomial((0,)), Monomial((1,)), Monomial((2,)))
        assert mono_basis(2, 1) == (Monomial((0, 0)), Monomial((1, 0)), Monomial((0, 1)))
        assert len(mono_basis(2, 2)) == 6

    def test_graded_lex_order(self):
        assert [tuple(m) for m in mono_basis(2, 2)] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_sizes_and_prefixes(self):
        for d in range(1, 5):
            for n in range(0, 9):
                basis = mono_basis(d, n)
                assert len(basis) == math.comb(n + d, d)
                for k in range(n + 1):
                    assert basis[:math.comb(k + d, d)] == mono_basis(d, k)

    def test_order_is_total(self):
        basis = mono_basis(3, 3)
        assert list(basis) == sorted(basis)
        assert all(a < b for a, b in zip(basis, basis[1:]))

    @pytest.mark.parametrize('d, n', [(0, 2), (-1, 1), (2, -1)])
    def test_invalid(self, d, n):
        with pytest.raises(ArgumentError):
            mono_basis(d, n)


class TestPolynomial:

    def test_evaluate(self):
        x1, x2 = x()
        assert evaluate(x1 ** 2 * x2, (2, 3)) == 12
        assert Polynomial.constant(2, 1).evaluate((5, -7)) == 1
        assert (x1 ** 3 - x2 ** 2).evaluate((4, 8)) == 0

    def test_evaluate_dimension_mismatch(self):
        x1, _ = x()
        with pytest.raises(ArgumentError):
            x1.evaluate((1, 2, 3))

    def test_zero_is_pruned(self):
        x1, x2 = x()
        p = x1 * x2 + 3
        z = arith(p, -p, 'add')
        assert z.is_zero()
        assert z.terms == {}
        assert z.degree == 0

    def test_mul(self):
        x1, x2 = x()
        assert arith(x1, x2, 'mul') == Polynomial.monomial((1, 1))
        t, = x(1)
        assert (t - 1) * (t + 1) == t ** 2 - 1

    def test_scale(self):
        x1, _ = x()
        assert arith(x1, 2.5, 'scale') == Polynomial.monomial((1, 0), 2.5)
        assert arith(x1, 0.0, 'scale').is_zero()

    def test_dimension_mismatch(self):
        x1, _ = x()
        t, = x(1)
        with pytest.raises(ArgumentError):
            x1 + t
        with pytest.raises(ArgumentError):
            arith(x1, x1, 'div')

    def test_product_evaluates_to_product(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p, q = random_poly(rng, 2, 4), random_poly(rng, 2, 4)
            pt = rng.uniform(-2, 2, size=2)
            lhs = (p * q).evaluate(pt)
            rhs = p.evaluate(pt) * q.evaluate(pt)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_evaluate_many_matches_evaluate(self):
        rng = np.random.default_rng(3)
        p = random_poly(rng, 3, 3)
        pts = rng.uniform(-1, 1, size=(10, 3))
        assert np.allclose(p.evaluate_many(pts), [p.evaluate(r) for r in pts])

    def test_diff(self):
        x1, x2 = x()
        p = x1 ** 3 * x2 + 2 * x2 ** 2
        assert p.diff(0) == 3 * x1 ** 2 * x2
        assert p.diff(1) == x1 ** 3 + 4 * x2


class TestCompose:

    def test_cusp_curve_collapses(self):
        x1, x2 = x()
        t, = x(1)
        assert compose(x1 ** 3 - x2 ** 2, [t ** 2, t ** 3]).is_zero()
        assert compose(x1, [t ** 2, t ** 3]) == t ** 2

    def test_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            p = random_poly(rng, 3, 4)
            assert compose(p, x(3)).terms == p.terms

    def test_shared_dimension_required(self):
        x1, x2 = x()
        t, = x(1)
        with pytest.raises(ArgumentError):
            compose(x1 + x2, [t, x1])
        with pytest.raises(ArgumentError):
            compose(x1 + x2, [t])


class TestJson:

    def test_load(self):
        p = Polynomial.from_json({'dim': 2, 'terms': [{'exps': [3, 0], 'coef': 1}, {'exps': [0, 2], 'coef': -1}]})
        x1, x2 = x()
        assert p == x1 ** 3 - x2 ** 2
        assert Polynomial.from_json(p.to_json()) == p

    @pytest.mark.parametrize('data', [
        {'dim': 2, 'terms': [{'exps': [-1, 0], 'coef': 1}]},
        {'dim': 2, 'terms': [{'exps': [1], 'coef': 1}]},
        {'dim': 2, 'terms': [{'exps': [1, 0]}]},
        {'terms': []},
    ])
    def test_rejects(self, data):
        with pytest.raises(FormatError):
            Polynomial.from_json(data)

import numpy as np
import pytest

from semialg_moments.catalog import get_fixture
from semialg_moments.errors import ArgumentError, CapacityError, DomainError, EstimationError, FormatError
from semialg_moments.polyring import Polynomial
from semialg_moments.semialg import BoundedPolySpec, SemiAlgebraicSet, fiber_problem, newton_project, tube_set


def square():
    x1, x2 = Polynomial.variables(2)
    return SemiAlgebraicSet(2, [x1, 1 - x1, x2, 1 - x2])


class TestPreorder:

    def test_counts_and_first(self):
        k = square()
        gens = k.preorder_generators()
        assert len(gens) == 16
        assert gens[0] == Polynomial.constant(2, 1)
        assert k.preorder_labels()[0] == '1'
        assert k.preorder_labels()[-1] == 'f1*f2*f3*f4'

    def test_binary_counter_order(self):
        x, = Polynomial.variables(1)
        f1, f2 = x, 1 - x
        gens = SemiAlgebraicSet(1, [f1, f2]).preorder_generators()
        assert gens == [Polynomial.constant(1, 1), f1, f2, f1 * f2]

    def test_empty_generator_list(self):
        k = SemiAlgebraicSet(2)
        assert k.preorder_generators() == [Polynomial.constant(2, 1)]
        assert k.contains((100.0, -5.0))

    def test_cap(self):
        x, = Polynomial.variables(1)
        k = SemiAlgebraicSet(1, [x + i for i in range(17)])
        with pytest.raises(CapacityError):
            k.preorder_generators()

    def test_closed_under_products(self):
        # f_I f_J = f_(I xor J) * f_(I and J)^2 with I, J the bit sets of the indices
        gens = square().preorder_generators()
        for i, a in enumerate(gens):
            for j, b in enumerate(gens):
                assert a * b == gens[i ^ j] * gens[i & j] ** 2

    def test_cap_allows_sixteen(self):
        x, = Polynomial.variables(1)
        assert len(SemiAlgebraicSet(1, [x + i for i in range(16)]).preorder_generators()) == 2 ** 16

    def test_generator_list_is_kept(self):
        # x^3 >= 0 and x >= 0 cut out the same half line with different preorders
        x, = Polynomial.variables(1)
        a = SemiAlgebraicSet(1, [x ** 3]).preorder_generators()
        b = SemiAlgebraicSet(1, [x]).preorder_generators()
        assert a != b


class TestMembership:

    def test_square(self):
        k = square()
        assert k.contains((0.5, 0.5))
        assert k.contains((0.0, 1.0))
        assert not k.contains((1.5, 0.5))
        assert k.violations(np.array([[0.5, 0.5], [-1.0, 0.0], [0.2, 2.0]])) == [1, 2]

    def test_tolerance(self):
        x, = Polynomial.variables(1)
        k = SemiAlgebraicSet(1, [x])
        assert k.contains((-1e-13,))
        assert not k.contains((-1e-9,))

    def test_dimension_checks(self):
        x1, _ = Polynomial.variables(2)
        t, = Polynomial.variables(1)
        with pytest.raises(ArgumentError):
            SemiAlgebraicSet(2, [x1, t])
        with pytest.raises(ArgumentError):
            square().contains((0.5,))


class TestSampling:

    def test_points_are_members(self):
        k = square()
        batch = k.sample([[-1, 2], [-1, 2]], 40, seed=3)
        assert len(batch) == 40
        assert not batch.exhausted
        assert k.violations(batch.points) == []

    def test_seeded(self):
        k = square()
        a = k.sample([[-1, 2], [-1, 2]], 10, seed=5).points
        b = k.sample([[-1, 2], [-1, 2]], 10, seed=5).points
        c = k.sample([[-1, 2], [-1, 2]], 10, seed=6).points
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_exhausted(self):
        x, = Polynomial.variables(1)
        k = SemiAlgebraicSet(1, [x - 10])
        batch = k.sample([[0, 1]], 5, seed=0)
        assert batch.exhausted
        assert len(batch) == 0
        with pytest.raises(EstimationError):
            k.range_estimate(x, [[0, 1]], 5)

    def test_bad_box(self):
        with pytest.raises(ArgumentError):
            square().sample([[1, 0], [0, 1]], 3)
        with pytest.raises(ArgumentError):
            square().sample([[0, 1]], 3)

    def test_range_estimate_is_inner(self):
        x1, x2 = Polynomial.variables(2)
        est = square().range_estimate(x1 + x2, [[0, 1], [0, 1]], 200, seed=1)
        assert 0.0 <= est.lo <= est.hi <= 2.0
        assert est.sampled
        assert est.samples == 200

    def test_acceptance(self):
        batch = square().sample([[0, 2], [0, 2]], 100, seed=2)
        assert batch.draws >= 256
        assert batch.acceptance == len(batch) / batch.draws
        assert 0.0 < batch.acceptance <= 1.0

    def test_bounded_h_on_example4a(self):
        fixture = get_fixture('example4a')
        batch = fixture.set.sample(fixture.box, 500, seed=4, project_onto=fixture.curve)
        assert len(batch) == 500
        h = fixture.spec.polys[0].evaluate_many(batch.points)
        assert np.all(np.abs(h) <= 4.0)
        assert np.all(h <= 4.0 ** (1.0 / 3.0) + 1e-6)

    def test_range_estimate_on_cylinder(self):
        fixture = get_fixture('cylinder(interval)')
        x1, _ = Polynomial.variables(2)
        est = fixture.set.range_estimate(x1, [[0.0, 1.0], [-5.0, 5.0]], 10 ** 4, seed=0)
        assert 0.0 <= est.lo < 0.05
        assert 0.95 < est.hi <= 1.0

    def test_curve_projection(self):
        x1, x2 = Polynomial.variables(2)
        g = x1 ** 3 + x2 ** 3 - 1
        pts = newton_project(np.array([[0.9, 0.4], [1.5, -0.5], [-1.0, 1.2]]), [g])
        assert np.all(np.abs(g.evaluate_many(pts)) < 1e-9)


class TestFiberProblem:

    def test_augmented_sequence(self):
        x1, x2 = Polynomial.variables(2)
        base = SemiAlgebraicSet(2, [x1, 1 - x1])
        spec = BoundedPolySpec([x1 * x2], [(0, 1)])
        fp = fiber_problem(base, spec, [0.5])
        assert fp.generators == (x1, 1 - x1, x1 * x2 - 0.5, 0.5 - x1 * x2)
        assert fp.contains((0.5, 1.0))
        assert not fp.contains((0.5, 0.5))

    def test_outside_range(self):
        x1, _ = Polynomial.variables(2)
        spec = BoundedPolySpec([x1], [(0, 1)])
        with pytest.raises(DomainError):
            fiber_problem(SemiAlgebraicSet(2), spec, [1.5])
        assert spec.contains_lambda([1.0 + 1e-12])

    def test_example2_point_fibers(self):
        fixture = get_fixture('example2')
        rng = np.random.default_rng(9)
        for lam in [(0.5, 0.25), (0.2, 0.8), (1.0, 1.0)]:
            fp = fiber_problem(fixture.set, fixture.spec, lam)
            point = np.array([lam[1], lam[0] / lam[1]])
            assert fp.contains(point)
            for step in (1e-14, 1e-10, 1e-6, 1e-3):
                for _ in range(20):
                    x = point + step * rng.normal(size=2)
                    if fp.contains(x):
                        assert np.linalg.norm(x - point) <= 1e-6

    def test_tube(self):
        x1, x2 = Polynomial.variables(2)
        h = x1 * x2
        k = tube_set(BoundedPolySpec([h], [(1, 2)]))
        assert k.generators == (h - 1, 2 - h)
        assert k.contains((1.0, 1.5))
        assert not k.contains((1.0, 3.0))


class TestJson:

    def test_round_trip(self):
        k = square()
        again = SemiAlgebraicSet.from_json(k.to_json())
        assert again.generators == k.generators

    def test_spec_defaults_to_unbounded(self):
        x1, _ = Polynomial.variables(2)
        spec = BoundedPolySpec.from_json({'polys': [x1.to_json()]})
        assert spec.ranges == ((-np.inf, np.inf),)

    @pytest.mark.parametrize('data', [
        {'generators': []},
        {'dim': 0, 'generators': []},
        {'dim': 2, 'generators': [{'dim': 1, 'terms': []}]},
    ])
    def test_rejects(self, data):
        with pytest.raises(FormatError):
            SemiAlgebraicSet.from_json(data)

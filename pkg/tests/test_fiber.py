import numpy as np
import pytest

from semialg_moments.catalog import LINE, POINT, get_fixture
from semialg_moments.errors import MembershipError
from semialg_moments.fiber import EMPTY, FiberPipeline, disintegration_residual, fiber_functionals, fiber_pipeline, \
    pushforward
from semialg_moments.functional import functional_from_measure
from semialg_moments.measure import AtomicMeasure
from semialg_moments.polyring import Polynomial, mono_basis
from semialg_moments.semialg import BoundedPolySpec


def two_atoms():
    return AtomicMeasure([[0.0, 0.0], [1.0, 2.0]], [1.0, 1.0])


def random_poly(rng, dim, degree):
    return Polynomial(dim, {m: float(rng.integers(-3, 4)) for m in mono_basis(dim, degree)})


class TestPushforward:

    def test_two_atoms(self):
        x1, _ = Polynomial.variables(2)
        push = pushforward(two_atoms(), [x1])
        assert push.support == [(0.0,), (1.0,)]
        assert push.masses == [1.0, 1.0]

    def test_constant(self):
        push = pushforward(two_atoms(), [Polynomial.constant(2, 3.0)])
        assert push.support == [(3.0,)]
        assert push.masses == [2.0]

    def test_value_pairs(self):
        x1, x2 = Polynomial.variables(2)
        mu = AtomicMeasure([[0.0, 1.0], [0.0, 5.0], [0.5, 1.0]], [0.2, 0.3, 0.5])
        push = pushforward(mu, [x1 * x2, x1])
        assert push.support == [(0.0, 0.0), (0.5, 0.5)]
        assert push.masses == pytest.approx([0.5, 0.5])
        assert push.groups == [[0, 1], [2]]

    def test_near_values_merge(self):
        x1, _ = Polynomial.variables(2)
        mu = AtomicMeasure([[1.0, 0.0], [1.0 + 1e-14, 3.0]], [1.0, 1.0])
        assert len(pushforward(mu, [x1])) == 1

    def test_mass_conservation(self):
        rng = np.random.default_rng(9)
        mu = AtomicMeasure(rng.integers(0, 3, size=(40, 2)).astype(float), rng.uniform(0.1, 2.0, size=40))
        x1, x2 = Polynomial.variables(2)
        push = pushforward(mu, [x1 + x2])
        assert push.mass == pytest.approx(mu.mass, rel=1e-12)
        assert [s for s in push.support] == sorted(push.support)


class TestFiberFunctionals:

    def test_point_evaluations(self):
        x1, x2 = Polynomial.variables(2)
        dec = fiber_functionals(two_atoms(), [x1], 2)
        l0, l1 = (f.functional for f in dec)
        assert l0.apply(x1 + x2) == 0.0
        assert l1.apply(x1 * x2) == 2.0

    def test_average_in_one_fiber(self):
        x1, x2 = Polynomial.variables(2)
        mu = AtomicMeasure([[1.0, 2.0], [1.0, -2.0]], [0.5, 0.5])
        dec = fiber_functionals(mu, [x1], 2)
        assert len(dec) == 1
        l = dec.fibers[0].functional
        assert l.apply(Polynomial.constant(2, 1.0)) == 1.0
        assert l.apply(x2) == 0.0
        assert l.apply(x2 * x2) == 4.0

    def test_constancy(self):
        x1, x2 = Polynomial.variables(2)
        h = x1 * x2
        rng = np.random.default_rng(2)
        pts = np.array([[1.0, 2.0], [2.0, 1.0], [0.5, 4.0], [1.0, 1.0], [0.25, 4.0]])
        mu = AtomicMeasure(pts, rng.uniform(0.5, 1.0, size=5))
        dec = fiber_functionals(mu, [h], 6)
        assert dec.support == [(1.0,), (2.0,)]
        for fiber in dec:
            lam = fiber.lam[0]
            assert fiber.functional.apply(Polynomial.constant(2, 1.0)) == pytest.approx(1.0)
            for p in mono_basis(2, 4):
                assert abs(fiber.functional.apply((h - lam) * Polynomial.monomial(p))) <= 1e-12
            assert fiber.functional.apply((h - lam) ** 2) <= 1e-20 * 16


class TestDisintegration:

    def test_total_mass(self):
        x1, x2 = Polynomial.variables(2)
        one = Polynomial.constant(1, 1.0)
        assert disintegration_residual(two_atoms(), [x1], one, x1 * x2 + x2 ** 2, 2) <= 1e-12

    def test_hand_computed(self):
        x1, x2 = Polynomial.variables(2)
        t, = Polynomial.variables(1)
        assert functional_from_measure(two_atoms(), 2).apply(x1 * x2) == 2.0
        assert disintegration_residual(two_atoms(), [x1], t, x2, 2) == 0.0

    def test_random_pairs(self):
        rng = np.random.default_rng(17)
        x1, _ = Polynomial.variables(2)
        pts = np.stack([rng.choice([0.0, 0.5, 1.0], size=20), rng.uniform(-3, 3, size=20)], axis=1)
        mu = AtomicMeasure(pts, rng.uniform(0.1, 1.0, size=20))
        for _ in range(100):
            q = random_poly(rng, 1, 2)
            p = random_poly(rng, 2, 2)
            scale = (1 + q.max_abs_coef()) * (1 + p.max_abs_coef()) * 81 * mu.mass
            assert disintegration_residual(mu, [x1], q, p, 4) <= 1e-10 * scale

    @pytest.mark.parametrize('name', ['example1', 'example2', 'example3'])
    def test_random_measures_on_catalog_sets(self, measures, name):
        fixture, mus = measures(name, 100, seed=2)
        h = fixture.spec.polys
        one = Polynomial.constant(len(h), 1.0)
        rng = np.random.default_rng(23)
        for mu in mus:
            reach = max(1.0, float(np.max(np.abs(mu.points))))
            q = random_poly(rng, len(h), 2)
            p = random_poly(rng, 2, 2)
            scale = (1 + q.max_abs_coef()) * (1 + p.max_abs_coef()) * reach ** 6 * mu.mass
            assert disintegration_residual(mu, h, q, p, 6) <= 1e-10 * scale
            assert disintegration_residual(mu, h, one, p, 6) <= 1e-10 * scale
            total = fiber_functionals(mu, h, 6).reconstruct(p)
            assert total == pytest.approx(functional_from_measure(mu, 6).apply(p), rel=1e-10, abs=1e-10 * scale)


class TestPipeline:

    def test_example3_points(self):
        fixture = get_fixture('example3')
        mu = fixture.sample_measure(30, seed=1)
        report = fiber_pipeline(fixture, mu, 1)
        assert report.base.passed
        assert len(report.fibers) == 30
        assert all(f.fiber_class == POINT for f in report.fibers)
        assert report.passed
        assert report.mass == pytest.approx(1.0)

    def test_cylinder_lines(self):
        fixture = get_fixture('cylinder')
        pts = [[0.1, 0.2, -1.0], [0.1, 0.2, 0.0], [0.1, 0.2, 2.0], [0.3, -0.4, 1.0]]
        mu = AtomicMeasure(pts, [0.25, 0.25, 0.25, 0.25])
        report = fiber_pipeline(fixture, mu, 1, workers=2)
        assert report.passed
        first, second = report.fibers
        assert first.lam == (0.1, 0.2)
        assert first.fiber_class == LINE
        assert sorted(round(v, 6) for v in first.line.measure.points[:, 0]) == [-1.0, 0.0, 2.0]
        assert second.line.measure.points[0, 0] == pytest.approx(1.0)
        assert all(r.passed for r in first.line.annihilation)

    def test_sampled_cylinder(self):
        fixture = get_fixture('cylinder')
        report = fiber_pipeline(fixture, fixture.sample_measure(20, seed=4), 1)
        assert report.passed
        assert all(f.line is not None and f.line.passed for f in report.fibers)

    def test_empty_grid_fiber(self):
        fixture = get_fixture('cylinder(interval)')
        mu = AtomicMeasure([[0.25, 1.0], [0.75, -1.0]], [0.5, 0.5])
        report = fiber_pipeline(fixture, mu, 1, grid=[[0.5]])
        assert [f.lam for f in report.fibers] == [(0.25,), (0.5,), (0.75,)]
        empty = report.fibers[1]
        assert empty.fiber_class == EMPTY
        assert empty.note == 'empty fiber'
        assert report.passed

    def test_membership(self):
        fixture = get_fixture('example3')
        mu = AtomicMeasure([[0.5, 3.0], [0.5, 10.0]], [0.5, 0.5])
        with pytest.raises(MembershipError) as err:
            fiber_pipeline(fixture, mu, 1)
        assert err.value.indices == [1]

    def test_report_json(self):
        fixture = get_fixture('example2')
        mu = AtomicMeasure([[0.0, 1.0], [0.0, 3.0], [0.5, 1.0]], [0.25, 0.25, 0.5])
        data = fiber_pipeline(fixture, mu, 1).to_json()
        assert set(data) == {'base', 'mass', 'fibers', 'passed'}
        assert [f['lambda'] for f in data['fibers']] == [[0.0, 0.0], [0.5, 0.5]]
        assert data['fibers'][0]['class'] == LINE
        assert data['fibers'][1]['class'] == POINT
        assert data['passed'] is True

    def test_base_is_part_of_the_verdict(self):
        x, = Polynomial.variables(1)
        fixture = get_fixture('halfline_linear')
        pipeline = FiberPipeline(fixture.set, BoundedPolySpec([x], [(0.0, 5.0)]), 1)
        report = pipeline.run(AtomicMeasure([0.5, 2.0], [0.5, 0.5]))
        assert report.base.passed
        assert report.passed

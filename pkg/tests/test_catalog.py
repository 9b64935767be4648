import numpy as np
import pytest

from semialg_moments.catalog import COMPACT, FIBER_CLASSES, LINE, POINT, SUBSET_OF_LINE, catalog, get_fixture, names
from semialg_moments.errors import ArgumentError, CatalogLookupError


def test_every_entry_builds():
    fixtures = catalog()
    assert tuple(fixtures) == names()
    for name, fixture in fixtures.items():
        assert fixture.fiber_class in FIBER_CLASSES
        assert len(fixture.box) == fixture.dim
        data = fixture.to_json()
        assert data['set']['dim'] == fixture.dim


@pytest.mark.parametrize('name', ['example1', 'example2', 'example3', 'halfline', 'cylinder', 'cylinder(interval)'])
def test_sampled_measure_lives_on_set(name):
    fixture = get_fixture(name)
    mu = fixture.sample_measure(25, seed=2)
    assert len(mu) == 25
    assert mu.mass == pytest.approx(1.0)
    assert fixture.set.violations(mu.points) == []


@pytest.mark.parametrize('name', ['example4a', 'example4b', 'cusp'])
def test_curve_fixtures_sample_the_curve(name):
    fixture = get_fixture(name)
    mu = fixture.sample_measure(15, seed=0)
    g = fixture.curve[0]
    assert np.all(np.abs(g.evaluate_many(mu.points)) <= 1e-6)


def test_example1_arguments():
    f = get_fixture('example1(1, 3, 0.5)')
    assert f.spec.ranges == ((1.0, 3.0),)
    assert f.set.contains((1.5, 2.0))
    assert not f.set.contains((0.0, 2.0))
    with pytest.raises(ArgumentError):
        get_fixture('example1(0, 1, 0)')
    with pytest.raises(ArgumentError):
        get_fixture('example1(1, 2, -1)')


def test_example2_classification():
    f = get_fixture('example2')
    assert f.classify((0, 0)) == LINE
    assert f.classify((0.5, 0.5)) == POINT
    assert f.classify((0, 0.5)) == POINT
    a, v = f.line_of((0, 0))
    assert a.tolist() == [0.0, 0.0]
    assert v.tolist() == [0.0, 1.0]


def test_recorded_classes():
    assert get_fixture('example3').fiber_class == POINT
    assert get_fixture('example4a').fiber_class == COMPACT
    assert get_fixture('halfline').fiber_class == SUBSET_OF_LINE
    assert get_fixture('cylinder').classify((0.1, 0.2)) == LINE


def test_line_of_without_lines():
    with pytest.raises(ArgumentError):
        get_fixture('example3').line_of((1, 0.5))


@pytest.mark.parametrize('name', ['', 'nope', 'example2(1)', 'example1(1,2)', 'example1(a,b,c)', 'cylinder(cube)'])
def test_unknown(name):
    with pytest.raises(CatalogLookupError):
        get_fixture(name)

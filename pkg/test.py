import sys

from semialg_moments.catalog import get_fixture
from semialg_moments.codec import dumps
from semialg_moments.counterexample import SeedSpec, counterexample
from semialg_moments.fiber import fiber_pipeline
from semialg_moments.functional import functional_from_measure
from semialg_moments.log import set_debug
from semialg_moments.univariate import quadrature_atoms


def check_fixture(name: str, count: int = 30):
    fixture = get_fixture(name)
    mu = fixture.sample_measure(count, seed=0)
    print('\nfixture:', fixture)
    print('\nmeasure:', mu)
    report = functional_from_measure(mu, 8).check_preorder_positivity(fixture.set, 1)
    print('\npreorder min eigenvalues:', report.min_eigenvalues)
    if fixture.spec is not None:
        pipeline = fiber_pipeline(fixture, mu, 1)
        print('\nfibers:', len(pipeline.fibers), 'passed:', pipeline.passed)


def check_quadrature():
    measure = quadrature_atoms([1, 0, 1, 0, 1])
    print('\natoms:', measure.points[:, 0].tolist(), 'weights:', measure.weights.tolist())


def check_counterexample():
    cert = counterexample(SeedSpec(3, 0.1), t=2)
    print('\ncertificate:', dumps({k: v for k, v in cert.to_json().items() if k in ('legs', 'L2_x1', 'eigenvalues')}))


if __name__ == '__main__':
    _name = len(sys.argv) > 1 and sys.argv[1] or 'example3'
    _debug = len(sys.argv) > 2
    if _debug:
        set_debug()
    check_fixture(_name)
    check_quadrature()
    check_counterexample()

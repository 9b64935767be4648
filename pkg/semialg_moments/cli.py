import argparse
import sys
from typing import List

from .catalog import catalog, get_fixture
from .codec import dumps, load_functional, load_json, load_measure, load_moments, load_spec, resolve_set
from .counterexample import SeedSpec, counterexample
from .errors import ArgumentError, CapacityError, CatalogLookupError, MomentProblemError, NonConvergenceError, \
    InfeasibleError, VerificationError
from .fiber import FiberPipeline
from .log import get_log, set_debug
from .tolerance import PSD, RANK, SEED
from .univariate import jacobi_matrix, quadrature_atoms

logging = get_log('cli')

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3


def _emit(data: dict):
    sys.stdout.write(dumps(data))
    sys.stdout.write('\n')


def _verdict(passed: bool) -> int:
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_check(args) -> int:
    functional = load_functional(args.functional)
    semialg_set, _ = resolve_set(args.set)
    level = args.level if args.level is not None else functional.level_for()
    report = functional.check_preorder_positivity(semialg_set, level, PSD.with_value(args.tol), envelope=args.envelope)
    _emit(report.to_json())
    return _verdict(report.passed)


def cmd_quadrature(args) -> int:
    moments = load_moments(args.moments)
    rank_tol = RANK.with_value(args.rank_tol)
    try:
        rec = jacobi_matrix(moments, rank_tol)
        measure = quadrature_atoms(moments, rank_tol)
    except InfeasibleError as e:
        _emit({'moments': moments.m.tolist(), 'error': str(e), 'passed': False})
        return EXIT_FAIL
    _emit({
        'moments': moments.m.tolist(),
        'atoms': measure.points[:, 0].tolist(),
        'weights': measure.weights.tolist(),
        'recurrence': rec.to_json(),
        'passed': True,
    })
    return EXIT_PASS


def _fiber_level(args) -> int:
    if args.degree is not None:
        if args.degree < 0:
            raise ArgumentError(f'Degree must be >= 0: {args.degree}')
        return (args.degree + 1) // 2
    return 3 if args.level is None else args.level


def cmd_fiber(args) -> int:
    measure = load_measure(args.measure)
    semialg_set, fixture = resolve_set(args.set)
    level = _fiber_level(args)
    kv = dict(tol=PSD.with_value(args.tol), rank_tol=RANK.with_value(args.rank_tol), workers=args.workers)
    if args.h:
        spec = load_spec(args.h)
        if fixture is not None:
            pipeline = FiberPipeline(semialg_set, spec, level, classify=fixture.classify,
                                     line_of=fixture.line_of if fixture.line else None, **kv)
        else:
            pipeline = FiberPipeline(semialg_set, spec, level, **kv)
    elif fixture is not None:
        pipeline = FiberPipeline.for_fixture(fixture, level, **kv)
    else:
        raise ArgumentError('A set file needs an h file')
    grid = load_json(args.grid) if args.grid else None
    report = pipeline.run(measure, grid)
    _emit(report.to_json())
    return _verdict(report.passed)


def cmd_counterexample(args) -> int:
    spec = SeedSpec(args.n, args.delta, args.max_iter, SEED.with_value(args.tol))
    warm = load_moments(args.warm_start) if args.warm_start else None
    try:
        cert = counterexample(spec, args.t, warm)
    except NonConvergenceError as e:
        _emit({
            'error': str(e),
            'iterations': e.iterations,
            'best_iterate': e.best_iterate.m.tolist() if e.best_iterate is not None else None,
            'residuals': {k: float(v) for k, v in e.residuals.items()},
            'passed': False,
        })
        return EXIT_NONCONVERGENCE
    except VerificationError as e:
        data = e.certificate.to_json() if e.certificate is not None else {}
        data['error'] = str(e)
        data['passed'] = False
        _emit(data)
        return EXIT_FAIL
    _emit(cert.to_json())
    return _verdict(cert.passed)


def cmd_catalog(args) -> int:
    if args.name:
        _emit(get_fixture(args.name).to_json())
    else:
        _emit({name: fixture.to_json() for name, fixture in catalog().items()})
    return EXIT_PASS


def cmd_measure(args) -> int:
    fixture = get_fixture(args.name)
    _emit(fixture.sample_measure(args.count, args.seed).to_json())
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='semialg-moments',
                                     description='Truncated moment problems on semi-algebraic sets')
    parser.add_argument('--debug', action='store_true', help='debug logging on stderr')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('check', help='preorder positivity of a functional on a set')
    p.add_argument('functional', help='functional JSON file')
    p.add_argument('set', help='catalog name or set JSON file')
    p.add_argument('--level', '-n', type=int, default=None, help='localizing level (default: largest stored)')
    p.add_argument('--tol', type=float, default=PSD.value)
    p.add_argument('--envelope', action='store_true',
                   help='measure the threshold against the absolute assembly |g||L| of each matrix')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('quadrature', help='atoms of a univariate moment vector')
    p.add_argument('moments', help='JSON file {"moments": [m0, ...]}')
    p.add_argument('--rank-tol', type=float, default=RANK.value)
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser('fiber', help='fiber decomposition report of an atomic measure')
    p.add_argument('measure', help='measure JSON file')
    p.add_argument('set', help='catalog name or set JSON file')
    p.add_argument('h', nargs='?', help='bounded polynomials JSON file (default: the fixture\'s)')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--level', '-n', type=int, default=None, help='localizing level n (default 3)')
    group.add_argument('--degree', type=int, default=None,
                       help='moment degree d of the check; runs at level n = ceil(d / 2)')
    p.add_argument('--tol', type=float, default=PSD.value)
    p.add_argument('--rank-tol', type=float, default=RANK.value)
    p.add_argument('--grid', help='JSON list of extra lambda points')
    p.add_argument('--workers', type=int, default=4)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser('counterexample', help='certified positive functional that is not a moment functional')
    p.add_argument('--n', type=int, default=3)
    p.add_argument('--delta', type=float, default=0.1)
    p.add_argument('--t', type=int, default=2)
    p.add_argument('--tol', type=float, default=SEED.value)
    p.add_argument('--max-iter', type=int, default=20000)
    p.add_argument('--warm-start', help='JSON file {"moments": [...]} to start the search from')
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser('catalog', help='fixture definitions')
    p.add_argument('name', nargs='?')
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser('measure', help='seeded uniform atomic measure on a fixture')
    p.add_argument('name')
    p.add_argument('--count', type=int, default=30)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    if args.debug:
        set_debug()
    try:
        return args.func(args)
    except (ValueError, CatalogLookupError, CapacityError) as e:
        # format, degree, domain and membership errors
        logging.error(str(e))
        return EXIT_USAGE
    except NonConvergenceError as e:
        logging.error(str(e))
        return EXIT_NONCONVERGENCE
    except MomentProblemError as e:
        # infeasible, degenerate, failed verification
        logging.error(str(e))
        return EXIT_FAIL

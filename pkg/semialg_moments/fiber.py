from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space
from threadpool import ThreadPool, WorkRequest

from .errors import ArgumentError, DegenerateError, InfeasibleError, MembershipError
from .functional import MomentFunctional
from .log import get_log
from .measure import AtomicMeasure
from .moment import PositivityReport
from .polyring import Polynomial
from .semialg import BoundedPolySpec, SemiAlgebraicSet, fiber_problem
from .tolerance import ANNIHILATION, GROUPING, PSD, RANK, Tolerance, as_tolerance
from .univariate import line_restriction, moments_of, quadrature_atoms

logging = get_log('fiber')

EMPTY = 'empty'
LINE_CLASSES = ('line', 'subset-of-line')
MOMENT_MATCH = 1e-8


def _polys(h) -> Tuple[Polynomial, ...]:
    if isinstance(h, BoundedPolySpec):
        return h.polys
    if isinstance(h, Polynomial):
        return (h,)
    return tuple(h)


def _even(k: int) -> int:
    return k + k % 2


class Pushforward(object):
    """nu = h_* mu: distinct value tuples lambda (lexicographic), their masses and atom groups."""

    def __init__(self, support: List[Tuple[float, ...]], masses: List[float], groups: List[List[int]]):
        self.support = support
        self.masses = masses
        self.groups = groups

    def __len__(self):
        return len(self.support)

    def __iter__(self):
        return iter(zip(self.support, self.masses))

    @property
    def mass(self) -> float:
        return float(sum(self.masses))

    def to_json(self) -> dict:
        return {'support': [list(s) for s in self.support], 'masses': list(self.masses)}


def pushforward(mu: AtomicMeasure, h, tol: Tolerance = None) -> Pushforward:
    """
    Group the atoms of mu by the value of h = (h_1..h_n). Equal values group exactly; values
    within tol componentwise are merged next, keyed by the smallest tuple of the cluster.
    """
    tol = as_tolerance(tol, GROUPING).threshold()
    polys = _polys(h)
    if not polys:
        raise ArgumentError('Need at least one polynomial to push forward along')
    for p in polys:
        if p.dim != mu.dim:
            raise ArgumentError(f'h has dimension {p.dim}, measure has {mu.dim}')
    values = np.stack([p.evaluate_many(mu.points) for p in polys], axis=1)
    exact: Dict[Tuple[float, ...], List[int]] = {}
    for i, row in enumerate(values):
        exact.setdefault(tuple(float(v) for v in row), []).append(i)
    keys = sorted(exact)
    clusters: List[Tuple[Tuple[float, ...], List[int]]] = []
    for key in keys:
        for rep, idx in clusters:
            if all(abs(a - b) <= tol for a, b in zip(rep, key)):
                idx.extend(exact[key])
                break
        else:
            clusters.append((key, list(exact[key])))
    support = [rep for rep, _ in clusters]
    groups = [sorted(idx) for _, idx in clusters]
    masses = [float(mu.weights[idx].sum()) for idx in groups]
    return Pushforward(support, masses, groups)


class Fiber(object):
    """One support point lambda of nu with the atoms over it and L_lambda = (1/nu_lambda) sum w_x delta_x."""

    def __init__(self, lam: Tuple[float, ...], mass: float, indices: List[int], measure: AtomicMeasure,
                 functional: MomentFunctional):
        self.lam = lam
        self.mass = mass
        self.indices = indices
        self.measure = measure
        self.functional = functional

    def __str__(self):
        return f'Fiber(lambda={list(self.lam)}, mass={self.mass:g}, atoms={len(self.indices)})'


class FiberDecomposition(object):

    def __init__(self, h: Sequence[Polynomial], fibers: List[Fiber], total_mass: float):
        self.h = tuple(h)
        self.fibers = fibers
        self.total_mass = total_mass

    def __len__(self):
        return len(self.fibers)

    def __iter__(self):
        return iter(self.fibers)

    @property
    def support(self) -> List[Tuple[float, ...]]:
        return [f.lam for f in self.fibers]

    @property
    def masses(self) -> List[float]:
        return [f.mass for f in self.fibers]

    def reconstruct(self, p: Polynomial, q: Polynomial = None) -> float:
        """sum_lambda nu_lambda q(lambda) L_lambda(p)."""
        total = 0.0
        for f in self.fibers:
            weight = f.mass * (q.evaluate(f.lam) if q is not None else 1.0)
            total += weight * f.functional.apply(p)
        return total

    def to_json(self) -> dict:
        return {'support': [list(s) for s in self.support], 'masses': self.masses,
                'atoms': [f.indices for f in self.fibers]}


def fiber_functionals(mu: AtomicMeasure, h, max_degree: int, tol: Tolerance = None) -> FiberDecomposition:
    push = pushforward(mu, h, tol)
    fibers = []
    for lam, mass, idx in zip(push.support, push.masses, push.groups):
        sub = AtomicMeasure(mu.points[idx], mu.weights[idx] / mass)
        fibers.append(Fiber(lam, mass, idx, sub, MomentFunctional.from_measure(sub, max_degree)))
    return FiberDecomposition(_polys(h), fibers, mu.mass)


def disintegration_residual(mu: AtomicMeasure, h, q: Polynomial, p: Polynomial, max_degree: int,
                            tol: Tolerance = None) -> float:
    """
    |L(q(h) p) - sum_lambda nu_lambda q(lambda) L_lambda(p)| with L the functional of mu.
    :param q: polynomial in len(h) variables
    :param p: polynomial in mu.dim variables
    """
    polys = _polys(h)
    if q.dim != len(polys):
        raise ArgumentError(f'q has {q.dim} variables, h has {len(polys)} components')
    functional = MomentFunctional.from_measure(mu, max_degree)
    lhs = functional.apply(q.compose(list(polys)) * p)
    rhs = fiber_functionals(mu, polys, max_degree, tol).reconstruct(p, q)
    return abs(lhs - rhs)


class LineSolve(object):
    """Univariate solve of a fiber carried by the line a + t v."""

    def __init__(self, a: np.ndarray, v: np.ndarray, annihilation: list, moments, measure: Optional[AtomicMeasure],
                 match_error: float, error: str = None):
        self.a = a
        self.v = v
        self.annihilation = annihilation
        self.moments = moments
        self.measure = measure
        self.match_error = match_error
        self.error = error
        self.passed = (error is None and all(r.passed for r in annihilation)
                       and match_error <= MOMENT_MATCH)

    def to_json(self) -> dict:
        return {
            'base': self.a.tolist(),
            'direction': self.v.tolist(),
            'annihilation': [r.to_json() for r in self.annihilation],
            'moments': self.moments.m.tolist() if self.moments is not None else None,
            'atoms': self.measure.points[:, 0].tolist() if self.measure is not None else [],
            'weights': self.measure.weights.tolist() if self.measure is not None else [],
            'match_error': self.match_error,
            'error': self.error,
            'passed': self.passed,
        }


class FiberResult(object):

    def __init__(self, lam: Tuple[float, ...], mass: float, atoms: int, fiber_class: str,
                 report: PositivityReport = None, line: LineSolve = None, note: str = None):
        self.lam = lam
        self.mass = mass
        self.atoms = atoms
        self.fiber_class = fiber_class
        self.report = report
        self.line = line
        self.note = note

    @property
    def passed(self) -> bool:
        if self.fiber_class == EMPTY:
            return True
        return self.report.passed and (self.line is None or self.line.passed)

    def to_json(self) -> dict:
        data = {
            'lambda': list(self.lam),
            'mass': self.mass,
            'atoms': self.atoms,
            'class': self.fiber_class,
            'report': self.report.to_json() if self.report is not None else None,
        }
        if self.line is not None:
            data['line'] = self.line.to_json()
        if self.note:
            data['note'] = self.note
        data['passed'] = self.passed
        return data


class PipelineReport(object):

    def __init__(self, base: PositivityReport, fibers: List[FiberResult], mass: float):
        self.base = base
        self.fibers = fibers
        self.mass = mass

    @property
    def passed(self) -> bool:
        return self.base.passed and all(f.passed for f in self.fibers)

    def to_json(self) -> dict:
        return {
            'base': self.base.to_json(),
            'mass': self.mass,
            'fibers': [f.to_json() for f in self.fibers],
            'passed': self.passed,
        }


class FiberPipeline(object):
    """
    Positivity of L on K at level n, then per fiber lambda of h_* mu positivity of L_lambda on
    the augmented sequence f(lambda), and a univariate solve for fibers carried by a line.
    Fibers are checked on a thread pool and reported in lexicographic lambda order.
    """

    def __init__(self, semialg_set: SemiAlgebraicSet, spec: BoundedPolySpec, n: int,
                 classify: Callable[[Tuple[float, ...]], str] = None,
                 line_of: Callable[[Tuple[float, ...]], Tuple[np.ndarray, np.ndarray]] = None,
                 tol: Tolerance = None, rank_tol: Tolerance = None, workers: int = 4):
        if spec.dim != semialg_set.dim:
            raise ArgumentError(f'h has dimension {spec.dim}, set has {semialg_set.dim}')
        if n < 0:
            raise ArgumentError(f'Level must be >= 0: {n}')
        self.set = semialg_set
        self.spec = spec
        self.n = n
        self.classify = classify or (lambda lam: 'other')
        self.line_of = line_of
        self.tol = as_tolerance(tol, PSD)
        self.rank_tol = as_tolerance(rank_tol, RANK)
        self.workers = max(1, workers)

    @classmethod
    def for_fixture(cls, fixture, n: int, **kv) -> 'FiberPipeline':
        if fixture.spec is None:
            raise ArgumentError(f'{fixture.name} has no bounded polynomials to decompose along')
        line_of = fixture.line_of if fixture.line is not None else None
        return cls(fixture.set, fixture.spec, n, classify=fixture.classify, line_of=line_of, **kv)

    def _product_degree(self, gens: Sequence[Polynomial]) -> int:
        return sum(g.degree for g in gens)

    def base_degree(self) -> int:
        return _even(2 * self.n + self._product_degree(self.set.generators))

    def fiber_degree(self) -> int:
        extra = 2 * sum(h.degree for h in self.spec.polys)
        return _even(2 * self.n + self._product_degree(self.set.generators) + extra)

    def check_membership(self, mu: AtomicMeasure):
        if mu.dim != self.set.dim:
            raise ArgumentError(f'Measure has dimension {mu.dim}, set has {self.set.dim}')
        bad = self.set.violations(mu.points)
        if bad:
            raise MembershipError(f'{len(bad)} atoms lie outside {self.set}', bad)

    def _solve_line(self, fiber: Fiber) -> LineSolve:
        a, v = self.line_of(fiber.lam)
        normals = null_space(v.reshape(1, -1))
        annihilation = []
        for u in normals.T:
            form = Polynomial.linear(u.tolist(), -float(u @ a))
            annihilation.append(fiber.functional.ideal_annihilation_check(form, ANNIHILATION))
        moments = line_restriction(fiber.functional, a, v)
        try:
            measure = quadrature_atoms(moments, self.rank_tol)
        except (InfeasibleError, DegenerateError) as e:
            return LineSolve(a, v, annihilation, moments, None, float('inf'), str(e))
        again = moments_of(measure, moments.n).m
        scale = max(1.0, float(np.max(np.abs(moments.m))))
        match = float(np.max(np.abs(again - moments.m))) / scale
        return LineSolve(a, v, annihilation, moments, measure, match)

    def _check_fiber(self, fiber: Fiber) -> FiberResult:
        problem = fiber_problem(self.set, self.spec, fiber.lam)
        # h - lambda vanishes on the fiber only up to grouping and round-off; measured against |g||L|
        report = fiber.functional.check_preorder_positivity(problem.set, self.n, self.tol, envelope=True)
        fiber_class = self.classify(fiber.lam)
        line = None
        if fiber_class in LINE_CLASSES and self.line_of is not None:
            line = self._solve_line(fiber)
        logging.debug(f'{fiber}: {fiber_class}, passed {report.passed}')
        return FiberResult(fiber.lam, fiber.mass, len(fiber.indices), fiber_class, report, line)

    def _work(self, results: dict, idx: int, fiber: Fiber):
        results[idx] = self._check_fiber(fiber)

    def run(self, mu: AtomicMeasure, grid: Sequence[Sequence[float]] = None) -> PipelineReport:
        """
        :param grid: extra lambda points; those carrying no atoms are reported as empty fibers
        :raise MembershipError: some atom of mu lies outside K
        """
        self.check_membership(mu)
        base_functional = MomentFunctional.from_measure(mu, self.base_degree())
        base = base_functional.check_preorder_positivity(self.set, self.n, self.tol)
        logging.info(f'base positivity on {self.set.name or "K"}: passed {base.passed}')
        decomposition = fiber_functionals(mu, self.spec, self.fiber_degree())

        results, errors = {}, []
        pool = ThreadPool(min(self.workers, max(1, len(decomposition))))
        for idx, fiber in enumerate(decomposition):
            pool.putRequest(WorkRequest(self._work, args=(results, idx, fiber),
                                        exc_callback=lambda req, info: errors.append(info)))
        pool.wait()
        pool.dismissWorkers(len(pool.workers))
        if errors:
            _, exc, tb = errors[0]
            raise exc.with_traceback(tb)

        fibers = [results[i] for i in sorted(results)]
        for lam in grid or ():
            lam = tuple(float(x) for x in lam)
            fiber_problem(self.set, self.spec, lam)
            if any(_close(lam, f.lam) for f in fibers):
                continue
            fibers.append(FiberResult(lam, 0.0, 0, EMPTY, note='empty fiber'))
        fibers.sort(key=lambda f: f.lam)
        report = PipelineReport(base, fibers, mu.mass)
        logging.info(f'{len(decomposition)} fibers checked, passed {report.passed}')
        return report


def _close(a, b) -> bool:
    eps = GROUPING.threshold()
    return all(abs(x - y) <= eps for x, y in zip(a, b))


def fiber_pipeline(fixture, mu: AtomicMeasure, n: int, tol: Tolerance = None, rank_tol: Tolerance = None,
                   grid: Sequence[Sequence[float]] = None, workers: int = 4) -> PipelineReport:
    return FiberPipeline.for_fixture(fixture, n, tol=tol, rank_tol=rank_tol, workers=workers).run(mu, grid)

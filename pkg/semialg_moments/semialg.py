from typing import List, Sequence

import numpy as np

from .errors import ArgumentError, CapacityError, DomainError, EstimationError, FormatError
from .log import get_log
from .polyring import Polynomial
from .tolerance import MEMBERSHIP, LAMBDA_RANGE, Tolerance, as_tolerance

logging = get_log('semialg')

MAX_PREORDER_GENERATORS = 16
MAX_SAMPLE_DRAWS = 10 ** 6
_NEWTON_STEPS = 40


def check_box(box, dim: int) -> np.ndarray:
    b = np.array(box, dtype=float)
    if b.shape != (dim, 2):
        raise ArgumentError(f'Sampling box must be {dim} intervals [lo, hi], got shape {b.shape}')
    if np.any(b[:, 0] > b[:, 1]):
        raise ArgumentError(f'Sampling box has an interval with lo > hi: {b.tolist()}')
    return b


class SampleBatch(object):
    """Output of SemiAlgebraicSet.sample. exhausted is set when the draw budget ran out first."""

    def __init__(self, points: np.ndarray, draws: int, exhausted: bool):
        self.points = points
        self.draws = draws
        self.exhausted = exhausted

    def __len__(self):
        return self.points.shape[0]

    @property
    def acceptance(self) -> float:
        return len(self) / self.draws if self.draws else 0.0


class RangeEstimate(object):
    """Inner estimate [lo, hi] of the range of h over K, from sampled points only."""

    sampled = True

    def __init__(self, lo: float, hi: float, samples: int, exhausted: bool = False):
        self.lo = lo
        self.hi = hi
        self.samples = samples
        self.exhausted = exhausted

    def __iter__(self):
        return iter((self.lo, self.hi))

    def to_json(self) -> dict:
        return {'interval': [self.lo, self.hi], 'samples': self.samples,
                'sampled': self.sampled, 'exhausted': self.exhausted}


class SemiAlgebraicSet(object):
    """
    K = {x in R^d : f_1(x) >= 0, ..., f_k(x) >= 0}. The generator list is kept as given:
    two lists describing the same set have different preorders.
    """

    def __init__(self, dim: int, generators: Sequence[Polynomial] = (), tolerance: Tolerance = MEMBERSHIP,
                 name: str = None):
        if not isinstance(dim, int) or dim < 1:
            raise ArgumentError(f'Dimension must be >= 1: {dim}')
        for g in generators:
            if not isinstance(g, Polynomial):
                raise ArgumentError(f'Generator must be a Polynomial: {g!r}')
            if g.dim != dim:
                raise ArgumentError(f'Generator {g} has dimension {g.dim}, expected {dim}')
        self.dim = dim
        self.generators = tuple(generators)
        self.tolerance = tolerance
        self.name = name

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        gens = ', '.join(str(g) for g in self.generators) or '-'
        return f'{self.name or "K"}(dim={self.dim}; {gens})'

    def preorder_generators(self) -> List[Polynomial]:
        """
        All 2^k products f_1^e_1 ... f_k^e_k, e in {0,1}^k, listed with e read as a binary
        counter (bit j <-> f_{j+1}), so the first entry is the constant 1.
        """
        k = len(self.generators)
        if k > MAX_PREORDER_GENERATORS:
            raise CapacityError(f'{k} generators exceed the preorder cap of {MAX_PREORDER_GENERATORS}'
                                f' ({2 ** k} products)')
        out = [Polynomial.constant(self.dim, 1.0)]
        for i in range(1, 2 ** k):
            low = (i & -i).bit_length() - 1
            out.append(out[i & (i - 1)] * self.generators[low])
        return out

    def preorder_labels(self) -> List[str]:
        k = len(self.generators)
        labels = []
        for i in range(2 ** k):
            parts = [f'f{j + 1}' for j in range(k) if i >> j & 1]
            labels.append('*'.join(parts) or '1')
        return labels

    def generator_values(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ArgumentError(f'Expected points of shape (r, {self.dim}), got {pts.shape}')
        if not self.generators:
            return np.zeros((pts.shape[0], 0))
        return np.stack([g.evaluate_many(pts) for g in self.generators], axis=1)

    def contains(self, x: Sequence[float]) -> bool:
        if len(x) != self.dim:
            raise ArgumentError(f'Point dimension {len(x)} != set dimension {self.dim}')
        return bool(self.contains_many(np.asarray([x], dtype=float))[0])

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        vals = self.generator_values(points)
        return np.all(vals >= -self.tolerance.threshold(), axis=1)

    def violations(self, points: np.ndarray) -> List[int]:
        return np.nonzero(~self.contains_many(points))[0].tolist()

    def sample(self, box, count: int, seed: int = 0, project_onto: Sequence[Polynomial] = None) -> SampleBatch:
        """
        Seeded uniform rejection sampling of K inside box.
        :param box: [[lo, hi], ...] one interval per coordinate
        :param count: number of points wanted
        :param seed: numpy generator seed, output is a function of it
        :param project_onto: equations g = 0; each draw first takes Newton steps towards
            the zero set of every g in turn (curve fixtures)
        """
        b = check_box(box, self.dim)
        if not isinstance(count, (int, np.integer)) or count < 0:
            raise ArgumentError(f'Sample count must be >= 0: {count}')
        rng = np.random.default_rng(seed)
        accepted, draws = [], 0
        have = 0
        chunk = max(256, 4 * count)
        while have < count and draws < MAX_SAMPLE_DRAWS:
            size = min(chunk, MAX_SAMPLE_DRAWS - draws)
            pts = b[:, 0] + (b[:, 1] - b[:, 0]) * rng.random((size, self.dim))
            draws += size
            if project_onto:
                pts = newton_project(pts, project_onto)
                inside = np.all((pts >= b[:, 0]) & (pts <= b[:, 1]), axis=1)
                pts = pts[inside & np.all(np.isfinite(pts), axis=1)]
            pts = pts[self.contains_many(pts)] if pts.shape[0] else pts
            accepted.append(pts[:count - have])
            have += accepted[-1].shape[0]
        points = np.concatenate(accepted, axis=0) if accepted else np.zeros((0, self.dim))
        batch = SampleBatch(points, draws, points.shape[0] < count)
        if batch.exhausted:
            logging.warning(f'{self}: only {len(batch)} of {count} points after {draws} draws')
        else:
            logging.debug(f'{self}: {count} points from {draws} draws (acceptance {batch.acceptance:.3g})')
        return batch

    def range_estimate(self, h: Polynomial, box, count: int, seed: int = 0,
                       project_onto: Sequence[Polynomial] = None) -> RangeEstimate:
        if h.dim != self.dim:
            raise ArgumentError(f'h has dimension {h.dim}, set has {self.dim}')
        batch = self.sample(box, count, seed, project_onto=project_onto)
        if not len(batch):
            raise EstimationError(f'No points of {self} found in {box} after {batch.draws} draws')
        vals = h.evaluate_many(batch.points)
        return RangeEstimate(float(vals.min()), float(vals.max()), len(batch), batch.exhausted)

    def with_generators(self, extra: Sequence[Polynomial], name: str = None) -> 'SemiAlgebraicSet':
        return SemiAlgebraicSet(self.dim, self.generators + tuple(extra), self.tolerance, name)

    def to_json(self) -> dict:
        return {'dim': self.dim, 'generators': [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict, name: str = None) -> 'SemiAlgebraicSet':
        try:
            dim, gens = data['dim'], data.get('generators', [])
        except (KeyError, TypeError, AttributeError) as e:
            raise FormatError('Set JSON needs "dim" and "generators"') from e
        if not isinstance(dim, int) or dim < 1:
            raise FormatError(f'Bad set dimension: {dim!r}')
        polys = [Polynomial.from_json(g) for g in gens]
        for p in polys:
            if p.dim != dim:
                raise FormatError(f'Generator dimension {p.dim} != set dimension {dim}')
        return cls(dim, polys, name=name)


def newton_project(points: np.ndarray, equations: Sequence[Polynomial], steps: int = _NEWTON_STEPS) -> np.ndarray:
    """Gauss-Newton steps x <- x - g(x) grad g(x) / |grad g(x)|^2 towards {g = 0}, row-wise."""
    pts = np.array(points, dtype=float)
    for g in equations:
        grad = g.gradient()
        for _ in range(steps):
            val = g.evaluate_many(pts)
            if np.all(np.abs(val) <= 1e-15):
                break
            gv = np.stack([d.evaluate_many(pts) for d in grad], axis=1)
            norm2 = np.sum(gv * gv, axis=1)
            # singular points (cusp tip) stay where they are
            safe = norm2 > 1e-300
            step = np.zeros_like(val)
            step[safe] = val[safe] / norm2[safe]
            pts = pts - step[:, None] * gv
    return pts


class BoundedPolySpec(object):
    """Bounded polynomials h_1..h_n with ranges [m_j, M_j]; their product box is Lambda."""

    def __init__(self, polys: Sequence[Polynomial], ranges: Sequence[Sequence[float]]):
        if not polys:
            raise ArgumentError('BoundedPolySpec needs at least one polynomial')
        if len(polys) != len(ranges):
            raise ArgumentError(f'{len(polys)} polynomials but {len(ranges)} ranges')
        dim = polys[0].dim
        for p in polys:
            if p.dim != dim:
                raise ArgumentError('All bounded polynomials must share one dimension')
        rr = []
        for lo, hi in ranges:
            lo, hi = float(lo), float(hi)
            if lo > hi:
                raise ArgumentError(f'Empty range [{lo}, {hi}]')
            rr.append((lo, hi))
        self.polys = tuple(polys)
        self.ranges = tuple(rr)

    @property
    def dim(self) -> int:
        return self.polys[0].dim

    def __len__(self):
        return len(self.polys)

    def contains_lambda(self, lam: Sequence[float], tol: Tolerance = None) -> bool:
        eps = as_tolerance(tol, LAMBDA_RANGE).threshold()
        if len(lam) != len(self):
            raise ArgumentError(f'lambda has {len(lam)} entries, expected {len(self)}')
        return all(lo - eps <= x <= hi + eps for x, (lo, hi) in zip(lam, self.ranges))

    def values(self, points: np.ndarray) -> np.ndarray:
        return np.stack([h.evaluate_many(points) for h in self.polys], axis=1)

    def to_json(self) -> dict:
        return {'polys': [h.to_json() for h in self.polys], 'ranges': [list(r) for r in self.ranges]}

    @classmethod
    def from_json(cls, data: dict) -> 'BoundedPolySpec':
        try:
            polys = [Polynomial.from_json(p) for p in data['polys']]
            ranges = data.get('ranges') or [[-np.inf, np.inf]] * len(polys)
            return cls(polys, ranges)
        except (KeyError, TypeError, AttributeError) as e:
            raise FormatError('h JSON needs "polys" (and optionally "ranges")') from e
        except ArgumentError as e:
            raise FormatError(str(e)) from e


class FiberProblem(object):
    """K intersected with the level set {h = lambda}, as the augmented sequence f(lambda)."""

    def __init__(self, base: SemiAlgebraicSet, spec: BoundedPolySpec, lam: Sequence[float]):
        self.base = base
        self.spec = spec
        self.lam = tuple(float(x) for x in lam)
        extra = []
        for h, l in zip(spec.polys, self.lam):
            extra.append(h - l)
            extra.append(-(h - l))
        self.set = base.with_generators(extra, name=f'{base.name or "K"}[lambda={list(self.lam)}]')
        self.generators = self.set.generators

    def contains(self, x: Sequence[float]) -> bool:
        return self.set.contains(x)


def fiber_problem(base: SemiAlgebraicSet, spec: BoundedPolySpec, lam: Sequence[float],
                  tol: Tolerance = None) -> FiberProblem:
    if spec.dim != base.dim:
        raise ArgumentError(f'h has dimension {spec.dim}, set has {base.dim}')
    if not spec.contains_lambda(lam, tol):
        raise DomainError(f'lambda={list(lam)} lies outside the range box {list(spec.ranges)}')
    return FiberProblem(base, spec, lam)


def tube_set(spec: BoundedPolySpec, name: str = None) -> SemiAlgebraicSet:
    """{x : m_j <= h_j(x) <= M_j} with the sequence (h_1 - m_1, M_1 - h_1, ...)."""
    gens = []
    for h, (lo, hi) in zip(spec.polys, spec.ranges):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ArgumentError(f'Tube needs finite ranges, got [{lo}, {hi}]')
        gens.append(h - lo)
        gens.append(hi - h)
    return SemiAlgebraicSet(spec.dim, gens, name=name)

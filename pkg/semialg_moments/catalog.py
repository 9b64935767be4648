import re
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from .errors import ArgumentError, CatalogLookupError
from .measure import AtomicMeasure
from .polyring import Polynomial
from .semialg import SemiAlgebraicSet, BoundedPolySpec, tube_set
from .tolerance import CURVE

COMPACT = 'compact'
LINE = 'line'
SUBSET_OF_LINE = 'subset-of-line'
POINT = 'point'
OTHER = 'other'
FIBER_CLASSES = (COMPACT, LINE, SUBSET_OF_LINE, POINT, OTHER)

_NAME = re.compile(r'^\s*([a-z0-9_]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$')


class Fixture(object):
    """
    A named set K_f with its bounded polynomials, sampling box and the fiber classification
    known for it. The classification is recorded per fixture, never computed.
    """
    name = None
    set = None
    spec = None
    box = None
    fiber_class = OTHER
    classifier = None
    line = None
    curve = ()
    description = None

    @classmethod
    def simple(cls, name: str, semialg_set: SemiAlgebraicSet, **kv):
        o = cls()
        o.name = name
        o.set = semialg_set
        semialg_set.name = name
        for k, v in kv.items():
            setattr(o, k, v)
        return o

    @property
    def dim(self) -> int:
        return self.set.dim

    def classify(self, lam: Sequence[float]) -> str:
        if self.classifier:
            return self.classifier(tuple(lam))
        return self.fiber_class

    def line_of(self, lam: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        """Base point a and direction v of the line carrying the fiber at lam."""
        if self.line is None:
            raise ArgumentError(f'{self.name} has no line fibers')
        a, v = self.line(tuple(lam))
        return np.asarray(a, dtype=float), np.asarray(v, dtype=float)

    def sample_measure(self, count: int, seed: int = 0) -> AtomicMeasure:
        """Uniform-weight measure (total mass 1) on sampled points of the set."""
        batch = self.set.sample(self.box, count, seed, project_onto=self.curve or None)
        if not len(batch):
            raise ArgumentError(f'No points of {self.name} found for a measure')
        return AtomicMeasure.uniform(batch.points)

    def __str__(self):
        return f'{self.name}: {self.description or ""}'

    def to_json(self) -> dict:
        return {
            'name': self.name,
            'description': self.description,
            'set': self.set.to_json(),
            'h': self.spec.to_json() if self.spec else None,
            'box': [list(b) for b in self.box],
            'fiber_class': self.fiber_class,
        }


def _x(dim):
    return Polynomial.variables(dim)


def example1(m: float = 1.0, M: float = 2.0, c: float = 0.0) -> Fixture:
    if c < 0 or not 0 < m <= M:
        raise ArgumentError(f'example1 needs c >= 0 and 0 < m <= M, got m={m}, M={M}, c={c}')
    x1, x2 = _x(2)
    h = (x1 - c) * x2
    spec = BoundedPolySpec([h], [(m, M)])
    return Fixture.simple(
        f'example1({m:g},{M:g},{c:g})', tube_set(spec),
        spec=spec, box=[[c - 3.0, c + 3.0], [-3.0, 3.0]], fiber_class=OTHER,
        description='band m <= (x1-c)x2 <= M; fibers are hyperbola branches')


def _example2_class(lam):
    if lam[0] != 0:
        return POINT
    if lam[1] != 0:
        return POINT
    return LINE


def example2() -> Fixture:
    x1, x2 = _x(2)
    h1, h2 = x1 * x2, x1
    k = SemiAlgebraicSet(2, [h1, 1 - h1, x1, 1 - x1])
    return Fixture.simple(
        'example2', k, spec=BoundedPolySpec([h1, h2], [(0, 1), (0, 1)]),
        box=[[0.0, 1.0], [-0.5, 10.0]], fiber_class=POINT, classifier=_example2_class,
        line=lambda lam: ((0.0, 0.0), (0.0, 1.0)),
        description='0 <= x1x2 <= 1, 0 <= x1 <= 1; fiber at (0,0) is the x2-axis, every other fiber a point')


def example3() -> Fixture:
    x1, x2 = _x(2)
    h1, h2 = x1 * x2, x1
    k = SemiAlgebraicSet(2, [h1 - 1, 2 - h1, x1, 1 - x1])
    return Fixture.simple(
        'example3', k, spec=BoundedPolySpec([h1, h2], [(1, 2), (0, 1)]),
        box=[[0.0, 1.0], [0.0, 20.0]], fiber_class=POINT,
        description='1 <= x1x2 <= 2, 0 <= x1 <= 1; every fiber is a point')


def example4a() -> Fixture:
    x1, x2 = _x(2)
    g = x1 ** 3 + x2 ** 3 - 1
    k = SemiAlgebraicSet(2, [g, -g], tolerance=CURVE)
    return Fixture.simple(
        'example4a', k, spec=BoundedPolySpec([x1 + x2], [(0.0, 4.0 ** (1.0 / 3.0))]),
        box=[[-2.5, 2.5], [-2.5, 2.5]], fiber_class=COMPACT, curve=(g,),
        description='curve x1^3 + x2^3 = 1 with bounded h = x1 + x2')


def example4b() -> Fixture:
    x1, x2 = _x(2)
    g = x2 ** 2 * (1 - x1) - x1 ** 3
    k = SemiAlgebraicSet(2, [g, -g], tolerance=CURVE)
    return Fixture.simple(
        'example4b', k, spec=BoundedPolySpec([x1], [(0.0, 1.0)]),
        box=[[0.0, 1.0], [-3.0, 3.0]], fiber_class=COMPACT, curve=(g,),
        description='curve x2^2 (1 - x1) = x1^3 with bounded h = x1')


def halfline() -> Fixture:
    x, = _x(1)
    return Fixture.simple(
        'halfline', SemiAlgebraicSet(1, [x ** 3]), box=[[-1.0, 5.0]], fiber_class=SUBSET_OF_LINE,
        description='[0, inf) defined by x^3 >= 0')


def halfline_linear() -> Fixture:
    x, = _x(1)
    return Fixture.simple(
        'halfline_linear', SemiAlgebraicSet(1, [x]), box=[[-1.0, 5.0]], fiber_class=SUBSET_OF_LINE,
        description='[0, inf) defined by x >= 0')


def cusp() -> Fixture:
    x1, x2 = _x(2)
    g = x1 ** 3 - x2 ** 2
    return Fixture.simple(
        'cusp', SemiAlgebraicSet(2, [g, -g], tolerance=CURVE), box=[[0.0, 4.0], [-8.0, 8.0]],
        fiber_class=OTHER, curve=(g,), description='cusp curve x1^3 = x2^2, points (t^2, t^3)')


def cylinder(base: str = 'disk') -> Fixture:
    if base == 'disk':
        x1, x2, x3 = _x(3)
        k = SemiAlgebraicSet(3, [1 - x1 ** 2 - x2 ** 2])
        return Fixture.simple(
            'cylinder(disk)', k, spec=BoundedPolySpec([x1, x2], [(-1, 1), (-1, 1)]),
            box=[[-1.0, 1.0], [-1.0, 1.0], [-3.0, 3.0]], fiber_class=LINE,
            line=lambda lam: ((lam[0], lam[1], 0.0), (0.0, 0.0, 1.0)),
            description='unit disk x R; fibers are vertical lines')
    if base == 'interval':
        x1, x2 = _x(2)
        k = SemiAlgebraicSet(2, [x1, 1 - x1])
        return Fixture.simple(
            'cylinder(interval)', k, spec=BoundedPolySpec([x1], [(0, 1)]),
            box=[[0.0, 1.0], [-3.0, 3.0]], fiber_class=LINE,
            line=lambda lam: ((lam[0], 0.0), (0.0, 1.0)),
            description='[0,1] x R; fibers are vertical lines')
    raise CatalogLookupError(f'Unknown cylinder base: {base}')


_BUILDERS: Dict[str, Callable[..., Fixture]] = {
    'example1': example1,
    'example2': example2,
    'example3': example3,
    'example4a': example4a,
    'example4b': example4b,
    'halfline': halfline,
    'halfline_linear': halfline_linear,
    'cusp': cusp,
    'cylinder': cylinder,
}

_DEFAULT_NAMES = ('example1', 'example2', 'example3', 'example4a', 'example4b', 'halfline',
                  'halfline_linear', 'cusp', 'cylinder', 'cylinder(interval)')


def get_fixture(name: str) -> Fixture:
    """
    :param name: catalog name, optionally with arguments: example1(m,M,c), cylinder(disk|interval)
    """
    match = _NAME.match(name or '')
    if not match or match.group(1) not in _BUILDERS:
        raise CatalogLookupError(f'Unknown catalog entry: {name!r}')
    key, raw = match.groups()
    builder = _BUILDERS[key]
    if not raw:
        return builder()
    args = [a.strip() for a in raw.split(',')]
    if key == 'cylinder':
        if len(args) != 1:
            raise CatalogLookupError(f'cylinder takes one base name: {name!r}')
        return builder(args[0])
    if key != 'example1':
        raise CatalogLookupError(f'{key} takes no arguments: {name!r}')
    try:
        values = [float(a) for a in args]
    except ValueError as e:
        raise CatalogLookupError(f'Bad example1 arguments: {name!r}') from e
    if len(values) != 3:
        raise CatalogLookupError(f'example1 takes (m, M, c): {name!r}')
    return builder(*values)


def catalog() -> Dict[str, Fixture]:
    return {name: get_fixture(name) for name in _DEFAULT_NAMES}


def names() -> Tuple[str, ...]:
    return _DEFAULT_NAMES

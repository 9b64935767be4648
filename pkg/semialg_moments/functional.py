import string
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from .abstract_functional import FunctionalInterface
from .errors import ArgumentError, DegreeError, FormatError
from .measure import AtomicMeasure
from .moment import MomentMatrixMixin
from .pencil import PencilMixin
from .polyring import Monomial, mono_basis


def _table_side(budget: int, weights: Tuple[int, ...]) -> int:
    return budget // min(weights) + 1


def _weight_grid(side: int, weights: Tuple[int, ...]) -> np.ndarray:
    # weighted degree of every exponent vector in the dense table
    grids = np.meshgrid(*[np.arange(side) * w for w in weights], indexing='ij')
    return np.sum(grids, axis=0)


class MomentFunctional(FunctionalInterface, MomentMatrixMixin, PencilMixin):
    """
    Truncated linear functional on R[x_1..x_d], stored as its moments L(x^e) for every
    exponent vector of weighted degree <= budget (weights default to 1: total degree).
    """

    def __init__(self, dim: int, max_degree: int, moments: Dict[Iterable[int], float],
                 weights: Sequence[int] = None, budget: int = None):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ArgumentError(f'Dimension must be >= 1: {dim}')
        self._dim = int(dim)
        self._weights = tuple(int(w) for w in weights) if weights else (1,) * self._dim
        if len(self._weights) != self._dim or min(self._weights) < 1:
            raise ArgumentError(f'Bad degree weights {self._weights} for dimension {self._dim}')
        if budget is None:
            if not isinstance(max_degree, (int, np.integer)) or max_degree < 0 or max_degree % 2:
                raise ArgumentError(f'max_degree must be an even integer >= 0: {max_degree}')
            budget = int(max_degree) * max(self._weights)
        if budget < 0:
            raise ArgumentError(f'Degree budget must be >= 0: {budget}')
        self._budget = int(budget)
        side = _table_side(self._budget, self._weights)
        admissible = _weight_grid(side, self._weights) <= self._budget
        table = np.full((side,) * self._dim, np.nan)
        for exps, v in moments.items():
            m = exps if isinstance(exps, Monomial) else Monomial(exps)
            if len(m) != self._dim:
                raise ArgumentError(f'Moment key {tuple(m)} does not match dimension {self._dim}')
            if not self.admits(m):
                raise DegreeError(f'Moment of {m.label()} is beyond the degree budget {self._budget}')
            table[tuple(m)] = float(v)
        missing = np.argwhere(admissible & np.isnan(table))
        if missing.size:
            raise ArgumentError(f'Incomplete moments: {len(missing)} missing, first {tuple(missing[0])}')
        table.setflags(write=False)
        self._table = table

    @classmethod
    def _from_table(cls, table: np.ndarray, weights: Tuple[int, ...], budget: int) -> 'MomentFunctional':
        o = cls.__new__(cls)
        o._dim = table.ndim
        o._weights = weights
        o._budget = budget
        table = np.array(table, dtype=float)
        table[_weight_grid(table.shape[0], weights) > budget] = np.nan
        table.setflags(write=False)
        o._table = table
        return o

    @classmethod
    def from_measure(cls, mu: AtomicMeasure, max_degree: int, weights: Sequence[int] = None,
                     budget: int = None) -> 'MomentFunctional':
        """
        L(p) = sum_i w_i p(x_i). An odd max_degree is rounded up.
        """
        if not isinstance(mu, AtomicMeasure):
            raise ArgumentError(f'Expected an AtomicMeasure, got {type(mu).__name__}')
        weights = tuple(weights) if weights else (1,) * mu.dim
        if budget is None:
            if max_degree < 0:
                raise ArgumentError(f'max_degree must be >= 0: {max_degree}')
            budget = (max_degree + max_degree % 2) * max(weights)
        side = _table_side(budget, weights)
        # powers[k][i, e] = x_ik ** e
        powers = [mu.points[:, k][:, None] ** np.arange(side)[None, :] for k in range(mu.dim)]
        letters = string.ascii_letters[1:mu.dim + 1]
        expr = 'a,' + ','.join(f'a{c}' for c in letters) + '->' + letters
        table = np.einsum(expr, mu.weights, *powers)
        return cls._from_table(table, weights, budget)

    @classmethod
    def from_vector(cls, moments: Sequence[float]) -> 'MomentFunctional':
        """Univariate functional from m_0..m_2n."""
        m = np.asarray(moments, dtype=float).reshape(-1)
        if m.size % 2 == 0:
            raise ArgumentError(f'Need an odd number of moments m_0..m_2n, got {m.size}')
        return cls._from_table(m, (1,), m.size - 1)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def degree_weights(self) -> Tuple[int, ...]:
        return self._weights

    @property
    def budget(self) -> int:
        return self._budget

    @property
    def max_degree(self) -> int:
        top = self._budget // max(self._weights)
        return top - top % 2

    @property
    def weighted(self) -> bool:
        return any(w != 1 for w in self._weights)

    def admits(self, mono: Iterable[int]) -> bool:
        mono = mono if isinstance(mono, Monomial) else Monomial(mono)
        return len(mono) == self._dim and mono.weighted_degree(self._weights) <= self._budget

    def moment(self, mono: Iterable[int]) -> float:
        m = mono if isinstance(mono, Monomial) else Monomial(mono)
        if not self.admits(m):
            raise DegreeError(f'No moment stored for {m.label()} (degree budget {self._budget})')
        return float(self._table[tuple(m)])

    def moment_array(self, exps: np.ndarray) -> np.ndarray:
        exps = np.asarray(exps, dtype=np.int64)
        if exps.shape[-1] != self._dim:
            raise ArgumentError(f'Exponent arrays need last axis {self._dim}, got {exps.shape}')
        if np.any(exps >= self._table.shape[0]) or np.any(exps < 0):
            raise DegreeError(f'Exponents beyond the degree budget {self._budget}')
        out = self._table[tuple(np.moveaxis(exps, -1, 0))]
        if np.any(np.isnan(out)):
            raise DegreeError(f'Exponents beyond the degree budget {self._budget}')
        return out

    def moments(self) -> Dict[Monomial, float]:
        """Stored moments in graded-lex order."""
        side = self._table.shape[0]
        top = side - 1
        out = {}
        for m in mono_basis(self._dim, top):
            if self.admits(m):
                out[m] = float(self._table[tuple(m)])
        return out

    def vector(self) -> np.ndarray:
        """m_0..m_budget for a univariate functional."""
        if self._dim != 1:
            raise ArgumentError('Moment vector view needs dimension 1')
        return np.array(self._table[:self._budget + 1])

    def __str__(self):
        return f'MomentFunctional(dim={self._dim}, max_degree={self.max_degree}, budget={self._budget})'

    def to_json(self) -> dict:
        data = {
            'dim': self._dim,
            'max_degree': self.max_degree,
            'moments': {m.key(): v for m, v in self.moments().items()},
        }
        if self.weighted:
            data['weights'] = list(self._weights)
            data['weighted_degree'] = self._budget
        return data

    @classmethod
    def from_json(cls, data: dict) -> 'MomentFunctional':
        try:
            dim, max_degree, raw = data['dim'], data['max_degree'], data['moments']
        except (KeyError, TypeError) as e:
            raise FormatError('Functional JSON needs "dim", "max_degree" and "moments"') from e
        if not isinstance(raw, dict):
            raise FormatError('"moments" must map "e1,...,ed" keys to values')
        moments = {Monomial.from_key(k): v for k, v in raw.items()}
        try:
            return cls(dim, max_degree, moments, data.get('weights'), data.get('weighted_degree'))
        except (ValueError, TypeError) as e:
            raise FormatError(f'Bad functional: {e}') from e


def functional_from_measure(mu: AtomicMeasure, max_degree: int) -> MomentFunctional:
    return MomentFunctional.from_measure(mu, max_degree)

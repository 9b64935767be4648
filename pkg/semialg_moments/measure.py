from typing import Sequence

import numpy as np

from .errors import ArgumentError, FormatError


class AtomicMeasure(object):
    """Finite positive combination of point masses, sum w_i * delta(x_i)."""

    def __init__(self, points, weights: Sequence[float]):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        w = np.array(weights, dtype=float).reshape(-1)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ArgumentError('AtomicMeasure needs at least one atom')
        if pts.shape[0] != w.shape[0]:
            raise ArgumentError(f'{pts.shape[0]} points but {w.shape[0]} weights')
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(w)):
            raise ArgumentError('Atoms and weights must be finite')
        bad = np.nonzero(w <= 0)[0]
        if bad.size:
            raise ArgumentError(f'Weights must be positive, got {w[bad].tolist()} at {bad.tolist()}')
        pts.setflags(write=False)
        w.setflags(write=False)
        self.points = pts
        self.weights = w

    @classmethod
    def uniform(cls, points, mass: float = 1.0) -> 'AtomicMeasure':
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        count = pts.shape[0]
        if count == 0:
            raise ArgumentError('AtomicMeasure needs at least one atom')
        return cls(pts, np.full(count, mass / count))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        return iter(zip(self.points, self.weights))

    def __str__(self):
        return f'AtomicMeasure(dim={self.dim}, atoms={len(self)}, mass={self.mass:g})'

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def to_json(self) -> dict:
        return {'points': self.points.tolist(), 'weights': self.weights.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> 'AtomicMeasure':
        try:
            points, weights = data['points'], data['weights']
        except (KeyError, TypeError) as e:
            raise FormatError('Measure JSON needs "points" and "weights"') from e
        if not points or any(not isinstance(p, (list, tuple)) for p in points):
            raise FormatError('Measure "points" must be a nonempty list of coordinate lists')
        if len({len(p) for p in points}) != 1:
            raise FormatError('All measure points must share one dimension')
        try:
            return cls(points, weights)
        except (ValueError, TypeError) as e:
            raise FormatError(str(e)) from e

from typing import Sequence

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .errors import ArgumentError, DegenerateError, DegreeError, FormatError, InfeasibleError
from .functional import MomentFunctional
from .log import get_log
from .measure import AtomicMeasure
from .polyring import Polynomial
from .tolerance import RANK, Tolerance, as_tolerance

logging = get_log('univariate')


class MomentVector1D(object):
    """m_0..m_2n of a functional on R[x]."""

    def __init__(self, moments: Sequence[float]):
        m = np.array(moments, dtype=float).reshape(-1)
        if m.size == 0 or m.size % 2 == 0:
            raise ArgumentError(f'Need an odd number of moments m_0..m_2n, got {m.size}')
        m.setflags(write=False)
        self.m = m

    @property
    def n(self) -> int:
        return (self.m.size - 1) // 2

    def __len__(self):
        return self.m.size

    def __getitem__(self, k):
        return self.m[k]

    def __iter__(self):
        return iter(self.m.tolist())

    def hankel(self, size: int = None, shift: int = 0) -> np.ndarray:
        size = self.n + 1 if size is None else size
        idx = np.arange(size)
        return self.m[idx[:, None] + idx[None, :] + shift]

    def truncated(self, n: int) -> 'MomentVector1D':
        if n > self.n:
            raise DegreeError(f'Cannot truncate {self.n} to the larger level {n}')
        return MomentVector1D(self.m[:2 * n + 1])

    def as_functional(self) -> MomentFunctional:
        return MomentFunctional.from_vector(self.m)

    def to_json(self) -> dict:
        return {'moments': self.m.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> 'MomentVector1D':
        try:
            return cls(data['moments'])
        except (KeyError, TypeError) as e:
            raise FormatError('Moment vector JSON needs a "moments" list') from e
        except ValueError as e:
            raise FormatError(str(e)) from e


def as_vector(m) -> MomentVector1D:
    return m if isinstance(m, MomentVector1D) else MomentVector1D(m)


def hankel_min_eig(m) -> float:
    m = as_vector(m)
    return float(eigvalsh(m.hankel())[0])


def localized_hankel(m, g: Polynomial) -> np.ndarray:
    """H_g[i, j] = sum_c g_c m_{i+j+c} of the largest size the moments allow."""
    m = as_vector(m)
    if g.dim != 1:
        raise ArgumentError(f'Localizing polynomial must be univariate, got dimension {g.dim}')
    size = (2 * m.n - g.degree) // 2 + 1
    if size < 1:
        raise DegreeError(f'{g} needs moments beyond m_{2 * m.n}')
    out = np.zeros((size, size))
    for mono, c in g.items():
        out += c * m.hankel(size, mono[0])
    return out


def localized_hankel_min_eig(m, g: Polynomial) -> float:
    return float(eigvalsh(localized_hankel(m, g))[0])


class JacobiRecurrence(object):
    """
    Three-term recurrence of the orthogonal polynomials of m.
    alpha: diagonal, beta: off-diagonal of the Jacobi matrix; rank is the numerical rank of
    the Hankel matrix and breakdown is set when it is below full size.
    """

    def __init__(self, alpha: np.ndarray, beta: np.ndarray, rank: int, size: int, mass: float):
        self.alpha = alpha
        self.beta = beta
        self.rank = rank
        self.size = size
        self.mass = mass

    @property
    def breakdown(self) -> bool:
        return self.rank < self.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.alpha) + np.diag(self.beta, 1) + np.diag(self.beta, -1)

    def to_json(self) -> dict:
        return {'alpha': self.alpha.tolist(), 'beta': self.beta.tolist(), 'rank': self.rank,
                'size': self.size, 'breakdown': self.breakdown}


def jacobi_matrix(m, rank_tol: Tolerance = None) -> JacobiRecurrence:
    """
    Recurrence coefficients from the Cholesky factor H = R^T R of the Hankel matrix.
    The factorization stops at the first pivot below rank_tol * lambda_max(H).
    With full rank the last diagonal entry is not determined by m; it repeats the previous one.
    :raise InfeasibleError: the Hankel matrix is indefinite
    """
    m = as_vector(m)
    rank_tol = as_tolerance(rank_tol, RANK)
    h = m.hankel()
    eig = eigvalsh(h)
    scale = float(np.max(np.abs(eig)))
    cut = rank_tol.threshold(scale)
    if eig[0] < -cut:
        raise InfeasibleError(f'indefinite Hankel: min eigenvalue {eig[0]:.6g}')
    if m[0] <= cut:
        raise DegenerateError(f'm_0 = {m[0]:g}: no positive mass to reconstruct')
    size = h.shape[0]
    r = np.zeros_like(h)
    rank = size
    for k in range(size):
        pivot = h[k, k] - r[:k, k] @ r[:k, k]
        if pivot <= cut:
            rank = k
            break
        r[k, k] = np.sqrt(pivot)
        r[k, k + 1:] = (h[k, k + 1:] - r[:k, k] @ r[:k, k + 1:]) / r[k, k]
    alpha = np.zeros(rank)
    beta = np.zeros(max(rank - 1, 0))
    for k in range(rank):
        prev = r[k - 1, k] / r[k - 1, k - 1] if k else 0.0
        if k + 1 < size:
            alpha[k] = r[k, k + 1] / r[k, k] - prev
        else:
            alpha[k] = alpha[k - 1] if k else 0.0
        if k + 1 < rank:
            beta[k] = r[k + 1, k + 1] / r[k, k]
    if rank < size:
        logging.debug(f'recurrence breaks down at {rank} of {size}')
    return JacobiRecurrence(alpha, beta, rank, size, float(m[0]))


def quadrature_atoms(m, rank_tol: Tolerance = None) -> AtomicMeasure:
    """
    Atomic measure with r = rank(H) atoms matching m: atoms are the eigenvalues of the
    Jacobi matrix, weights m_0 times the squared first eigenvector components.
    """
    rec = jacobi_matrix(m, rank_tol)
    nodes, vecs = eigh(rec.matrix())
    weights = rec.mass * vecs[0, :] ** 2
    keep = weights > 0
    if not np.all(keep):
        logging.warning(f'dropping {int(np.sum(~keep))} quadrature nodes with zero weight')
    return AtomicMeasure(nodes[keep].reshape(-1, 1), weights[keep])


def moments_of(mu: AtomicMeasure, n: int) -> MomentVector1D:
    """m_0..m_2n of a univariate atomic measure."""
    if mu.dim != 1:
        raise ArgumentError(f'Expected a measure on the line, got dimension {mu.dim}')
    x = mu.points[:, 0]
    return MomentVector1D((mu.weights[None, :] * x[None, :] ** np.arange(2 * n + 1)[:, None]).sum(axis=1))


def line_parameter(a: Sequence[float], v: Sequence[float]) -> Polynomial:
    """t(x) = v.(x - a) / |v|^2, so t(a + s v) = s."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    if a.shape != v.shape or a.ndim != 1:
        raise ArgumentError(f'Base point {a.tolist()} and direction {v.tolist()} must be vectors of one length')
    nv = float(v @ v)
    if nv == 0:
        raise ArgumentError('Line direction must be nonzero')
    return Polynomial.linear((v / nv).tolist(), -float(a @ v) / nv)


def line_restriction(functional: MomentFunctional, a: Sequence[float], v: Sequence[float]) -> MomentVector1D:
    """m_k = L(t^k) for k <= L.max_degree, t the line parameter of a + t v."""
    t = line_parameter(a, v)
    if t.dim != functional.dim:
        raise ArgumentError(f'Line lives in dimension {t.dim}, functional in {functional.dim}')
    powers = [Polynomial.monomial((k,)).compose([t]) for k in range(functional.max_degree + 1)]
    return MomentVector1D([functional.apply(p) for p in powers])

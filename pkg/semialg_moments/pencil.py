from typing import Optional

import numpy as np
from scipy.linalg import eigh

from .errors import ArgumentError, DegenerateError
from .log import get_log
from .polyring import Polynomial
from .tolerance import ANNIHILATION, PSD, RANK, Tolerance, as_tolerance

logging = get_log('pencil')


class CompressedOperator(object):
    """
    Multiplication by p compressed to the numerical range of M_n(L):
    B = W^-1/2 U^T S A S U W^-1/2 with S the diagonal equilibration of M_n(L),
    U, W its kept eigenpairs and A the localizing matrix of p.
    """

    def __init__(self, p: Polynomial, level: int, basis, matrix: np.ndarray, lift: np.ndarray, rank: int):
        self.p = p
        self.level = level
        self.basis = basis
        self.matrix = matrix
        # columns map an eigenvector of matrix to polynomial coefficients on basis
        self._lift = lift
        self.rank = rank
        self._eig = None

    def spectrum(self):
        if self._eig is None:
            self._eig = eigh(self.matrix) if self.rank else (np.zeros(0), np.zeros((0, 0)))
        return self._eig

    def eigenvalues(self) -> np.ndarray:
        return self.spectrum()[0]

    def witness(self, k: int) -> Polynomial:
        """Polynomial q with L(p q^2) / L(q^2) equal to the k-th eigenvalue and L(q^2) = 1."""
        vals, vecs = self.spectrum()
        coefs = self._lift @ vecs[:, k]
        return Polynomial(len(self.basis[0]), {m: c for m, c in zip(self.basis, coefs)})

    def to_json(self) -> dict:
        return {'level': self.level, 'rank': self.rank, 'spectrum': self.eigenvalues().tolist()}


class PencilReport(object):

    def __init__(self, max_eig: float, min_eig: float, bound: float, threshold: float, rank: int, size: int):
        self.max_eig = max_eig
        self.min_eig = min_eig
        self.bound = bound
        self.threshold = threshold
        self.rank = rank
        self.size = size
        self.passed = max_eig <= bound + threshold

    def to_json(self) -> dict:
        return {
            'max_eig': self.max_eig,
            'min_eig': self.min_eig,
            'bound': self.bound,
            'threshold': self.threshold,
            'rank': self.rank,
            'size': self.size,
            'passed': self.passed,
        }


class IntervalReport(object):

    def __init__(self, op: CompressedOperator, a: Optional[float], b: Optional[float], tol: Tolerance):
        eig = op.eigenvalues()
        self.a = a
        self.b = b
        self.rank = op.rank
        self.min_eig = float(eig[0])
        self.max_eig = float(eig[-1])
        scale = max(abs(v) for v in (a or 0.0, b or 0.0, self.min_eig, self.max_eig))
        self.threshold = tol.threshold(scale)
        self.lower_passed = a is None or self.min_eig >= a - self.threshold
        self.upper_passed = b is None or self.max_eig <= b + self.threshold
        self.lower_witness = op.witness(0)
        self.upper_witness = op.witness(len(eig) - 1)

    @property
    def passed(self) -> bool:
        return self.lower_passed and self.upper_passed

    def to_json(self) -> dict:
        return {
            'a': self.a,
            'b': self.b,
            'min_eig': self.min_eig,
            'max_eig': self.max_eig,
            'threshold': self.threshold,
            'rank': self.rank,
            'lower_passed': self.lower_passed,
            'upper_passed': self.upper_passed,
            'lower_witness': self.lower_witness.to_json(),
            'upper_witness': self.upper_witness.to_json(),
            'passed': self.passed,
        }


class AnnihilationReport(object):

    def __init__(self, value: float, square_value: float, threshold: float):
        self.value = abs(value)
        self.square_value = abs(square_value)
        self.threshold = threshold
        self.passed = self.value <= threshold and self.square_value <= threshold

    def to_json(self) -> dict:
        return {'abs_L_p': self.value, 'abs_L_p2': self.square_value,
                'threshold': self.threshold, 'passed': self.passed}


class PencilMixin(object):
    # needs MomentMatrixMixin

    def compressed_operator(self, p: Polynomial, n: int, rank_tol: Tolerance = None) -> CompressedOperator:
        """
        Symmetric compression of multiplication by p onto the range of M_n(L). Its eigenvalues
        are the generalized eigenvalues of (localizing(p), M_n) on that range.
        :raise DegenerateError: M_n(L) has no positive direction
        """
        rank_tol = as_tolerance(rank_tol, RANK)
        mm = self.moment_matrix(n)
        aa = self.localizing_matrix(p, n)
        diag = np.diag(mm.entries).copy()
        if not np.any(diag > 0):
            raise DegenerateError(f'Moment matrix at level {n} is zero')
        s = np.where(diag > 0, 1.0 / np.sqrt(np.where(diag > 0, diag, 1.0)), 1.0)
        m_eq = s[:, None] * mm.entries * s[None, :]
        a_eq = s[:, None] * aa.entries * s[None, :]
        w, u = eigh(m_eq)
        top = w[-1]
        if top <= 0:
            raise DegenerateError(f'Moment matrix at level {n} has no positive eigenvalue')
        keep = w > rank_tol.threshold(top)
        w, u = w[keep], u[:, keep]
        proj = u / np.sqrt(w)[None, :]
        b = proj.T @ a_eq @ proj
        b = 0.5 * (b + b.T)
        logging.debug(f'compressed {p} at level {n}: rank {w.size} of {mm.size}')
        return CompressedOperator(p, n, mm.basis, b, s[:, None] * proj, int(w.size))

    def operator_spectrum(self, p: Polynomial, n: int, rank_tol: Tolerance = None) -> np.ndarray:
        return self.compressed_operator(p, n, rank_tol).eigenvalues()

    def pencil_norm_check(self, p: Polynomial, rho: float, n: int, tol: Tolerance = None,
                          rank_tol: Tolerance = None) -> PencilReport:
        """
        M_n(p^2 L) <= rho^2 M_n(L) on the range of M_n(L).
        :param rho: claimed bound of |p| on K
        """
        if rho < 0:
            raise ArgumentError(f'rho must be >= 0: {rho}')
        tol = as_tolerance(tol, PSD)
        op = self.compressed_operator(p * p, n, rank_tol)
        eig = op.eigenvalues()
        bound = float(rho) ** 2
        report = PencilReport(float(eig[-1]), float(eig[0]), bound, tol.threshold(bound), op.rank, len(op.basis))
        logging.debug(f'pencil |{p}| <= {rho}: max eig {report.max_eig:.6g}, passed {report.passed}')
        return report

    def operator_interval_check(self, p: Polynomial, a: Optional[float], b: Optional[float], n: int,
                                tol: Tolerance = None, rank_tol: Tolerance = None) -> IntervalReport:
        """
        a M_n(L) <= M_n(p L) <= b M_n(L) on the range of M_n(L); either bound may be None.
        """
        if a is not None and b is not None and a > b:
            raise ArgumentError(f'Empty interval [{a}, {b}]')
        op = self.compressed_operator(p, n, rank_tol)
        return IntervalReport(op, a, b, as_tolerance(tol, PSD))

    def ideal_annihilation_check(self, p: Polynomial, tol: Tolerance = None) -> AnnihilationReport:
        """|L(p)| and |L(p^2)|, both expected 0 when p vanishes on the support."""
        tol = as_tolerance(tol, ANNIHILATION)
        value = self.apply(p)
        square_value = self.apply(p * p)
        mass = abs(self.apply(Polynomial.constant(self.dim, 1.0)))
        scale = max(1.0, mass) * max(1.0, p.max_abs_coef()) ** 2
        return AnnihilationReport(value, square_value, tol.threshold() * scale)

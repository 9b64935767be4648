from functools import lru_cache
from typing import List, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from .errors import ArgumentError, DegreeError
from .log import get_log
from .polyring import Monomial, Polynomial, mono_basis
from .semialg import SemiAlgebraicSet
from .tolerance import PSD, RANK, Tolerance, as_tolerance

logging = get_log('moment')


@lru_cache(maxsize=128)
def basis_exponents(d: int, n: int) -> np.ndarray:
    e = np.array(mono_basis(d, n), dtype=np.int64).reshape(-1, d)
    e.setflags(write=False)
    return e


class IndexedSymmetricMatrix(object):
    """Dense symmetric matrix whose rows and columns are indexed by a monomial basis."""

    def __init__(self, basis: Sequence[Monomial], entries: np.ndarray):
        entries = np.asarray(entries, dtype=float)
        if entries.shape != (len(basis), len(basis)):
            raise ArgumentError(f'Matrix shape {entries.shape} does not match basis size {len(basis)}')
        self.basis = tuple(basis)
        self.entries = entries
        self._eig = None

    @property
    def size(self) -> int:
        return len(self.basis)

    def eigenvalues(self) -> np.ndarray:
        if self._eig is None:
            self._eig = eigvalsh(self.entries) if self.size else np.zeros(0)
        return self._eig

    def min_eigenvalue(self) -> float:
        eig = self.eigenvalues()
        return float(eig[0]) if eig.size else 0.0

    def max_eigenvalue(self) -> float:
        eig = self.eigenvalues()
        return float(eig[-1]) if eig.size else 0.0

    def scale(self) -> float:
        eig = self.eigenvalues()
        return float(np.max(np.abs(eig))) if eig.size else 0.0

    def rank(self, tol: Tolerance = None) -> int:
        eig = self.eigenvalues()
        if not eig.size:
            return 0
        cut = as_tolerance(tol, RANK).threshold(self.scale())
        return int(np.sum(eig > cut))

    def is_psd(self, tol: Tolerance = None) -> bool:
        return self.min_eigenvalue() >= -as_tolerance(tol, PSD).threshold(self.scale())

    def __eq__(self, other):
        if not isinstance(other, IndexedSymmetricMatrix):
            return NotImplemented
        return self.basis == other.basis and np.array_equal(self.entries, other.entries)

    def to_json(self) -> dict:
        return {
            'basis': [m.key() for m in self.basis],
            'entries': self.entries.tolist(),
        }


class GeneratorCheck(object):
    """Positivity of one localizing matrix."""

    def __init__(self, label: str, generator: Polynomial, level: int, matrix: IndexedSymmetricMatrix,
                 tol: Tolerance, scale: float = None):
        self.label = label
        self.generator = generator
        self.level = level
        self.size = matrix.size
        self.value = float(matrix.entries[0, 0]) if matrix.size else 0.0
        self.min_eig = matrix.min_eigenvalue()
        self.max_eig = matrix.max_eigenvalue()
        self.scale = max(matrix.scale(), scale or 0.0)
        self.threshold = tol.threshold(self.scale)
        self.passed = self.min_eig >= -self.threshold

    def to_json(self) -> dict:
        return {
            'generator': self.label,
            'polynomial': str(self.generator),
            'level': self.level,
            'L_g': self.value,
            'size': self.size,
            'min_eig': self.min_eig,
            'max_eig': self.max_eig,
            'threshold': self.threshold,
            'passed': self.passed,
        }


class PositivityReport(object):
    """Truncated check of L(T_f) >= 0: one entry per preorder product."""

    def __init__(self, checks: List[GeneratorCheck], level: int, tol: Tolerance):
        self.checks = checks
        self.level = level
        self.tol = tol

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def min_eigenvalues(self) -> List[float]:
        return [c.min_eig for c in self.checks]

    def failures(self) -> List[GeneratorCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, label: str) -> GeneratorCheck:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            'level': self.level,
            'tolerance': self.tol.value,
            'checks': [c.to_json() for c in self.checks],
            'passed': self.passed,
        }


class MomentMatrixMixin(object):
    # needs FunctionalInterface

    def apply(self, p: Polynomial) -> float:
        """
        L(p); never truncates
        :raise DegreeError: p has a monomial without a stored moment
        """
        if p.dim != self.dim:
            raise ArgumentError(f'Polynomial dimension {p.dim} != functional dimension {self.dim}')
        total = 0.0
        for m, c in p.items():
            total += c * self.moment(m)
        return total

    def level_for(self, g: Polynomial = None) -> int:
        """Largest n with L(g x^a x^b) stored for all |a|, |b| <= n; negative when none."""
        wg = g.weighted_degree(self.degree_weights) if g is not None else 0
        step = 2 * max(self.degree_weights)
        return (self.budget - wg) // step

    def _require_level(self, g: Polynomial, n: int, what: str):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ArgumentError(f'Level must be >= 0: {n}')
        top = self.level_for(g)
        if n > top:
            raise DegreeError(f'{what} at level {n} needs more moments than stored '
                              f'(budget {self.budget}, largest level {top})')

    def _assemble(self, g: Polynomial, n: int, absolute: bool = False) -> np.ndarray:
        """
        sum_c g_c L(x^(c+a+b)) over basis pairs (a, b); with absolute, sum_c |g_c| |L(x^(c+a+b))|,
        the magnitude the round-off of the plain assembly is measured against.
        """
        e = basis_exponents(self.dim, n)
        size = e.shape[0]
        if g.is_zero():
            return np.zeros((size, size))
        terms = np.array([m for m, _ in g.items()], dtype=np.int64)
        coefs = np.array([c for _, c in g.items()])
        idx = e[None, :, None, :] + e[None, None, :, :] + terms[:, None, None, :]
        vals = self.moment_array(idx)
        if absolute:
            return np.tensordot(np.abs(coefs), np.abs(vals), axes=1)
        return np.tensordot(coefs, vals, axes=1)

    def moment_matrix(self, n: int) -> IndexedSymmetricMatrix:
        """M_n(L)[a, b] = L(x^a x^b) over the degree <= n basis."""
        self._require_level(None, n, 'Moment matrix')
        one = Polynomial.constant(self.dim, 1.0)
        mat = IndexedSymmetricMatrix(mono_basis(self.dim, n), self._assemble(one, n))
        logging.debug(f'moment matrix level {n}: size {mat.size}')
        return mat

    def localizing_matrix(self, g: Polynomial, n: int) -> IndexedSymmetricMatrix:
        """L(g x^a x^b) over the degree <= n basis."""
        if g.dim != self.dim:
            raise ArgumentError(f'Polynomial dimension {g.dim} != functional dimension {self.dim}')
        self._require_level(g, n, f'Localizing matrix of {g}')
        mat = IndexedSymmetricMatrix(mono_basis(self.dim, n), self._assemble(g, n))
        logging.debug(f'localizing matrix of {g} level {n}: size {mat.size}')
        return mat

    def check_preorder_positivity(self, semialg_set: SemiAlgebraicSet, n: int,
                                  tol: Tolerance = None, envelope: bool = False) -> PositivityReport:
        """
        Localizing matrix of every product f_1^e_1 ... f_k^e_k at level
        n_g = min(n, largest level the stored moments allow for g); it passes when its smallest
        eigenvalue is >= -tol * max(1, lambda_max).
        :param envelope: measure the threshold against the largest eigenvalue of the entrywise
            absolute assembly sum_c |g_c| |L(x^(c+a+b))| when that is larger
        :raise DegreeError: some product does not fit even at level 0
        """
        tol = as_tolerance(tol, PSD)
        if semialg_set.dim != self.dim:
            raise ArgumentError(f'Set dimension {semialg_set.dim} != functional dimension {self.dim}')
        if n < 0:
            raise ArgumentError(f'Level must be >= 0: {n}')
        checks = []
        for label, g in zip(semialg_set.preorder_labels(), semialg_set.preorder_generators()):
            level = min(n, self.level_for(g))
            if level < 0:
                raise DegreeError(f'Generator {label} = {g} does not fit the moment budget {self.budget}')
            scale = float(eigvalsh(self._assemble(g, level, absolute=True))[-1]) if envelope else None
            check = GeneratorCheck(label, g, level, self.localizing_matrix(g, level), tol, scale)
            logging.debug(f'{label}: level {level} size {check.size} min eig {check.min_eig:.3e}')
            checks.append(check)
        report = PositivityReport(checks, n, tol)
        if not report.passed:
            logging.info(f'preorder positivity fails for {[c.label for c in report.failures()]}')
        return report

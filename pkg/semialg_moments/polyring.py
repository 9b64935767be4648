import math
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ArgumentError, FormatError


class Monomial(tuple):
    """Exponent vector x^e. Ordered graded-lexicographically: lower degree first,
    within one degree x1 before x2 before ... (descending lexicographic exponents)."""

    def __new__(cls, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if not exps:
            raise ArgumentError('Monomial needs at least one variable')
        for e in exps:
            if e < 0:
                raise ArgumentError(f'Negative exponent in {exps}')
        return super().__new__(cls, exps)

    @classmethod
    def one(cls, dim: int) -> 'Monomial':
        return cls((0,) * dim)

    @classmethod
    def unit(cls, dim: int, idx: int) -> 'Monomial':
        e = [0] * dim
        e[idx] = 1
        return cls(e)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(weights, self))

    def sort_key(self) -> tuple:
        return (self.degree,) + tuple(-e for e in self)

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        if len(self) != len(other):
            raise ArgumentError(f'Dimension mismatch: {len(self)} != {len(other)}')
        return Monomial(a + b for a, b in zip(self, other))

    def __lt__(self, other):
        return self.sort_key() < Monomial.sort_key(other)

    def __le__(self, other):
        return self.sort_key() <= Monomial.sort_key(other)

    def __gt__(self, other):
        return self.sort_key() > Monomial.sort_key(other)

    def __ge__(self, other):
        return self.sort_key() >= Monomial.sort_key(other)

    # tuple defines these; keep hashing consistent with equality
    __eq__ = tuple.__eq__
    __hash__ = tuple.__hash__

    def evaluate(self, x: Sequence[float]) -> float:
        return math.prod(xi ** e for xi, e in zip(x, self) if e)

    def label(self, names: Sequence[str] = None) -> str:
        names = names or default_names(len(self))
        parts = []
        for n, e in zip(names, self):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f'{n}^{e}')
        return '*'.join(parts) or '1'

    def key(self) -> str:
        """Comma-joined exponents, the key format of the JSON functional schema."""
        return ','.join(str(e) for e in self)

    @classmethod
    def from_key(cls, key: str) -> 'Monomial':
        try:
            return cls(int(x) for x in key.split(','))
        except ValueError as e:
            raise FormatError(f'Bad monomial key: {key!r}') from e


def default_names(dim: int) -> List[str]:
    if dim == 1:
        return ['x']
    return [f'x{i + 1}' for i in range(dim)]


@lru_cache(maxsize=256)
def _basis(d: int, n: int) -> Tuple[Monomial, ...]:
    out = []
    for deg in range(n + 1):
        for idx in combinations_with_replacement(range(d), deg):
            e = [0] * d
            for i in idx:
                e[i] += 1
            out.append(Monomial(e))
    return tuple(out)


def mono_basis(d: int, n: int) -> Tuple[Monomial, ...]:
    """
    All monomials of degree <= n in d variables, graded-lex ordered.
    :return: tuple of size C(n+d, d)
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ArgumentError(f'Dimension must be >= 1: {d}')
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ArgumentError(f'Degree must be >= 0: {n}')
    return _basis(int(d), int(n))


def basis_size(d: int, n: int) -> int:
    return math.comb(n + d, d)


class Polynomial:
    """Sparse real polynomial: {Monomial: coefficient}, exact zeros pruned."""

    __slots__ = ('_dim', '_terms', '_hash')

    def __init__(self, dim: int, terms: Dict[Iterable[int], float] = None):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ArgumentError(f'Dimension must be >= 1: {dim}')
        self._dim = int(dim)
        tt = {}
        for exps, c in (terms or {}).items():
            m = exps if isinstance(exps, Monomial) else Monomial(exps)
            if len(m) != self._dim:
                raise ArgumentError(f'Monomial {tuple(m)} does not match dimension {self._dim}')
            c = float(c)
            if c == 0.0:
                continue
            tt[m] = tt.get(m, 0.0) + c
            if tt[m] == 0.0:
                del tt[m]
        self._terms = dict(sorted(tt.items(), key=lambda kv: kv[0].sort_key()))
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Monomial, float]) -> 'Polynomial':
        # terms already validated; prune and order only
        p = cls.__new__(cls)
        p._dim = dim
        p._terms = dict(sorted(((m, c) for m, c in terms.items() if c != 0.0), key=lambda kv: kv[0].sort_key()))
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim: int) -> 'Polynomial':
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, c: float) -> 'Polynomial':
        return cls(dim, {Monomial.one(dim): c})

    @classmethod
    def variable(cls, dim: int, idx: int) -> 'Polynomial':
        if not 0 <= idx < dim:
            raise ArgumentError(f'Variable index {idx} out of range for dimension {dim}')
        return cls(dim, {Monomial.unit(dim, idx): 1.0})

    @classmethod
    def variables(cls, dim: int) -> List['Polynomial']:
        return [cls.variable(dim, i) for i in range(dim)]

    @classmethod
    def monomial(cls, exps: Iterable[int], coef: float = 1.0) -> 'Polynomial':
        m = Monomial(exps)
        return cls(len(m), {m: coef})

    @classmethod
    def linear(cls, coefs: Sequence[float], const: float = 0.0) -> 'Polynomial':
        dim = len(coefs)
        terms = {Monomial.unit(dim, i): c for i, c in enumerate(coefs)}
        terms[Monomial.one(dim)] = const
        return cls(dim, terms)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Dict[Monomial, float]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=0)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return max((m.weighted_degree(weights) for m in self._terms), default=0)

    def max_abs_coef(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def coefficient(self, exps: Iterable[int]) -> float:
        return self._terms.get(Monomial(exps), 0.0)

    def _check_dim(self, other: 'Polynomial'):
        if self._dim != other._dim:
            raise ArgumentError(f'Dimension mismatch: {self._dim} != {other._dim}')

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            self._check_dim(other)
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return Polynomial.constant(self._dim, float(other))
        raise TypeError(f'Unsupported operand: {type(other).__name__}')

    def __add__(self, other) -> 'Polynomial':
        other = self._coerce(other)
        tt = dict(self._terms)
        for m, c in other._terms.items():
            tt[m] = tt.get(m, 0.0) + c
        return Polynomial._raw(self._dim, tt)

    __radd__ = __add__

    def __neg__(self) -> 'Polynomial':
        return Polynomial._raw(self._dim, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> 'Polynomial':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'Polynomial':
        return self._coerce(other) - self

    def scale(self, alpha: float) -> 'Polynomial':
        alpha = float(alpha)
        return Polynomial._raw(self._dim, {m: alpha * c for m, c in self._terms.items()})

    def __mul__(self, other) -> 'Polynomial':
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self.scale(other)
        other = self._coerce(other)
        tt = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                tt[m] = tt.get(m, 0.0) + c1 * c2
        return Polynomial._raw(self._dim, tt)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'Polynomial':
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ArgumentError(f'Power must be a nonnegative integer: {k}')
        out = Polynomial.constant(self._dim, 1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._dim, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, x: Sequence[float]) -> float:
        if len(x) != self._dim:
            raise ArgumentError(f'Point dimension {len(x)} != polynomial dimension {self._dim}')
        x = [float(v) for v in x]
        return sum(c * m.evaluate(x) for m, c in self._terms.items())

    __call__ = evaluate

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at the rows of an (r, dim) array."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self._dim:
            raise ArgumentError(f'Expected points of shape (r, {self._dim}), got {pts.shape}')
        out = np.zeros(pts.shape[0])
        for m, c in self._terms.items():
            out += c * np.prod(pts ** np.asarray(m), axis=1)
        return out

    def diff(self, idx: int) -> 'Polynomial':
        if not 0 <= idx < self._dim:
            raise ArgumentError(f'Variable index {idx} out of range for dimension {self._dim}')
        tt = {}
        for m, c in self._terms.items():
            e = m[idx]
            if e:
                mm = list(m)
                mm[idx] -= 1
                tt[Monomial(mm)] = c * e
        return Polynomial._raw(self._dim, tt)

    def gradient(self) -> List['Polynomial']:
        return [self.diff(i) for i in range(self._dim)]

    def compose(self, subs: Sequence['Polynomial']) -> 'Polynomial':
        """Replace variable i by subs[i] and expand."""
        if len(subs) != self._dim:
            raise ArgumentError(f'Need {self._dim} substitutions, got {len(subs)}')
        if not subs:
            raise ArgumentError('Empty substitution list')
        target = subs[0].dim
        for s in subs:
            if s.dim != target:
                raise ArgumentError('Substituted polynomials must share one dimension')
        powers = [{0: Polynomial.constant(target, 1.0), 1: s} for s in subs]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * subs[i]
            return cache[e]

        tt = {}
        for m, c in self._terms.items():
            prod = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    prod = prod * power(i, e)
            for mm, cc in prod._terms.items():
                tt[mm] = tt.get(mm, 0.0) + cc
        return Polynomial._raw(target, tt)

    def __str__(self):
        if not self._terms:
            return '0'
        names = default_names(self._dim)
        out = []
        for m, c in reversed(list(self._terms.items())):
            lbl = m.label(names)
            sign = '-' if c < 0 else '+'
            a = abs(c)
            if lbl == '1':
                body = f'{a:g}'
            elif a == 1.0:
                body = lbl
            else:
                body = f'{a:g}*{lbl}'
            out.append(f'{sign} {body}')
        s = ' '.join(out)
        return s[2:] if s.startswith('+ ') else '-' + s[2:]

    def __repr__(self):
        return f'Polynomial(dim={self._dim}, {self})'

    def to_json(self) -> dict:
        return {
            'dim': self._dim,
            'terms': [{'exps': list(m), 'coef': c} for m, c in self._terms.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> 'Polynomial':
        try:
            dim = data['dim']
            raw = data['terms']
        except (KeyError, TypeError) as e:
            raise FormatError(f'Polynomial JSON needs "dim" and "terms": {data!r}') from e
        if not isinstance(dim, int) or dim < 1:
            raise FormatError(f'Bad polynomial dimension: {dim!r}')
        terms = {}
        for t in raw:
            try:
                exps, coef = t['exps'], float(t['coef'])
            except (KeyError, TypeError, ValueError) as e:
                raise FormatError(f'Bad polynomial term: {t!r}') from e
            if len(exps) != dim:
                raise FormatError(f'Exponent list {exps} does not match dimension {dim}')
            if any((not isinstance(e, int)) or e < 0 for e in exps):
                raise FormatError(f'Exponents must be nonnegative integers: {exps}')
            m = Monomial(exps)
            terms[m] = terms.get(m, 0.0) + coef
        return cls(dim, terms)


def evaluate(p: Polynomial, x: Sequence[float]) -> float:
    return p.evaluate(x)


def compose(p: Polynomial, subs: Sequence[Polynomial]) -> Polynomial:
    return p.compose(subs)


def arith(p: Polynomial, q, op: str) -> Polynomial:
    """
    :param op: add | mul | scale (q is then a real number)
    """
    if op == 'add':
        return p + q
    if op == 'mul':
        return p * q
    if op == 'scale':
        return p.scale(q)
    raise ArgumentError(f'Unknown operation: {op}')

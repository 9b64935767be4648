from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .catalog import cusp
from .errors import ArgumentError, DegreeError, NonConvergenceError, VerificationError
from .functional import MomentFunctional
from .log import get_log
from .polyring import Polynomial
from .tolerance import ANNIHILATION, CURVE, PSD, SEED, Tolerance, as_tolerance
from .univariate import MomentVector1D, as_vector, localized_hankel

logging = get_log('counterexample')

CURVE_WEIGHTS = (2, 3)
CURVE_BOX = [[-4.0, 4.0], [-8.0, 8.0]]
CURVE_POINTS = 200
NOT_A_COUNTEREXAMPLE = 'L2(x1)=0, not a counterexample'


def _x3() -> Polynomial:
    return Polynomial.monomial((3,))


def cusp_equation() -> Polynomial:
    x1, x2 = Polynomial.variables(2)
    return x1 ** 3 - x2 ** 2


class SeedSpec(object):
    """Target of the seed search: m_0..m_2n with m_0 = 1, m_1 = -delta."""

    def __init__(self, n: int = 3, delta: float = 0.1, max_iter: int = 20000, tol: Tolerance = None):
        if not isinstance(n, (int, np.integer)) or n < 3:
            raise ArgumentError(f'Seed level n must be an integer >= 3: {n}')
        if delta < 0:
            raise ArgumentError(f'delta must be >= 0: {delta}')
        if max_iter < 1:
            raise ArgumentError(f'max_iter must be >= 1: {max_iter}')
        self.n = int(n)
        self.delta = float(delta)
        self.max_iter = int(max_iter)
        self.tol = as_tolerance(tol, SEED)

    @property
    def margin(self) -> float:
        # eigenvalue floor of the cone projection
        return 100 * self.tol.value

    def start(self) -> np.ndarray:
        m = np.zeros(2 * self.n + 1)
        m[0] = 1.0
        m[1] = -self.delta
        return m

    def to_json(self) -> dict:
        return {'n': self.n, 'delta': self.delta, 'max_iter': self.max_iter, 'tol': self.tol.value}


def _eig_bound(eig: np.ndarray, tol: Tolerance) -> float:
    # the tighter of -tol and the default positivity-check threshold
    return min(tol.value, PSD.threshold(float(np.max(np.abs(eig)))))


def seed_residuals(m, spec: SeedSpec) -> Dict[str, float]:
    """
    Violation of every seed constraint; all <= 0 means certified. A certified seed has both
    Hankel minimum eigenvalues >= -tol and passes check_preorder_positivity at its default tolerance.
    """
    m = as_vector(m)
    h = m.hankel()
    g = localized_hankel(m, _x3())
    eh, eg = eigvalsh(h), eigvalsh(g)
    tol = spec.tol
    return {
        'm0': abs(m[0] - 1.0) - tol.value,
        'm1': abs(m[1] + spec.delta) - tol.value,
        'hankel': -eh[0] - _eig_bound(eh, tol),
        'localized': -eg[0] - _eig_bound(eg, tol),
    }


def _certified(res: Dict[str, float]) -> bool:
    return all(v <= 0 for v in res.values())


class _LiftedProblem(object):
    # pairs (H, G): H ~ m_{i+j} of size n+1, G ~ m_{i+j+3} of size n-1

    def __init__(self, spec: SeedSpec):
        self.spec = spec
        n = spec.n
        ih = np.arange(n + 1)
        ig = np.arange(n - 1)
        self.kh = ih[:, None] + ih[None, :]
        self.kg = ig[:, None] + ig[None, :] + 3
        size = 2 * n + 1
        self.counts = (np.bincount(self.kh.ravel(), minlength=size)
                       + np.bincount(self.kg.ravel(), minlength=size)).astype(float)

    def embed(self, m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return m[self.kh], m[self.kg]

    def vector(self, h: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Least-squares Hankel vector of (H, G) with m_0, m_1 pinned: the affine projection."""
        size = 2 * self.spec.n + 1
        sums = (np.bincount(self.kh.ravel(), weights=h.ravel(), minlength=size)
                + np.bincount(self.kg.ravel(), weights=g.ravel(), minlength=size))
        m = sums / self.counts
        m[0] = 1.0
        m[1] = -self.spec.delta
        return m

    def project_affine(self, h, g):
        return self.embed(self.vector(h, g))

    def project_cone(self, h, g):
        return _clip(h, self.spec.margin), _clip(g, self.spec.margin)


def _clip(a: np.ndarray, floor: float) -> np.ndarray:
    w, u = eigh(0.5 * (a + a.T))
    return (u * np.maximum(w, floor)) @ u.T


def find_seed(spec: SeedSpec = None, warm_start=None) -> MomentVector1D:
    """
    Dykstra iteration between the shifted PSD cone {H >= eps I, G >= eps I} and the affine set of
    Hankel-structured pairs with m_0 = 1, m_1 = -delta. Every affine iterate is certified with
    the eigenvalue oracles; convergence alone is never trusted.
    :param warm_start: moment vector of any length; truncated or zero padded to 2n+1 entries
    :raise NonConvergenceError: max_iter reached, carries the iterate with the smallest violation
    """
    spec = spec or SeedSpec()
    m = spec.start()
    if warm_start is not None:
        w = np.asarray(warm_start.m if isinstance(warm_start, MomentVector1D) else warm_start,
                       dtype=float).reshape(-1)
        k = min(w.size, m.size)
        m = np.zeros(m.size)
        m[:k] = w[:k]
        m[0], m[1] = 1.0, -spec.delta
    res = seed_residuals(m, spec)
    if _certified(res):
        logging.info(f'seed certified at the start point (n={spec.n}, delta={spec.delta:g})')
        return MomentVector1D(m)

    problem = _LiftedProblem(spec)
    x = problem.embed(m)
    p = (np.zeros_like(x[0]), np.zeros_like(x[1]))
    q = (np.zeros_like(x[0]), np.zeros_like(x[1]))
    best, best_violation, best_res = m, max(res.values()), res
    for it in range(1, spec.max_iter + 1):
        y = problem.project_cone(x[0] + p[0], x[1] + p[1])
        p = (x[0] + p[0] - y[0], x[1] + p[1] - y[1])
        x = problem.project_affine(y[0] + q[0], y[1] + q[1])
        q = (y[0] + q[0] - x[0], y[1] + q[1] - x[1])
        m = problem.vector(*x)
        res = seed_residuals(m, spec)
        violation = max(res.values())
        if violation < best_violation:
            best, best_violation, best_res = m, violation, res
        if violation <= 0:
            logging.info(f'seed certified after {it} iterations (n={spec.n}, delta={spec.delta:g})')
            return MomentVector1D(m)
        if it % 1000 == 0:
            logging.debug(f'iteration {it}: violation {violation:.3e}')
    raise NonConvergenceError(f'No certified seed after {spec.max_iter} iterations '
                              f'(best violation {best_violation:.3e})',
                              best_iterate=MomentVector1D(best), residuals=best_res, iterations=spec.max_iter)


def lift_even(m) -> MomentVector1D:
    """L1(x^2k) = m_k, L1(x^(2k+1)) = 0."""
    m = as_vector(m)
    out = np.zeros(2 * len(m) - 1)
    out[::2] = m.m
    return MomentVector1D(out)


def lift_curve(m1) -> MomentFunctional:
    """
    L2(x1^a x2^b) = m1[2a + 3b] on every monomial with 2a + 3b <= len(m1) - 1, i.e.
    L2(p) = L1(p(x^2, x^3)). The functional's weighted budget is that bound.
    """
    m1 = as_vector(m1)
    budget = len(m1) - 1
    moments = {}
    for a in range(budget // 2 + 1):
        for b in range((budget - 2 * a) // 3 + 1):
            moments[(a, b)] = m1[2 * a + 3 * b]
    return MomentFunctional(2, 0, moments, weights=CURVE_WEIGHTS, budget=budget)


def curve_split(p: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """
    u, v with p(x^2, x^3) = u(x^2) + x^3 v(x^2), so that L2(p^2) = L(u^2) + L(x^3 v^2)
    for L2 lifted from L.
    """
    if p.dim != 2:
        raise ArgumentError(f'Expected a polynomial in two variables, got dimension {p.dim}')
    x = Polynomial.variable(1, 0)
    on_curve = p.compose([x ** 2, x ** 3])
    u, v = {}, {}
    for mono, c in on_curve.items():
        k = mono[0]
        if k % 2 == 0:
            u[(k // 2,)] = c
        else:
            v[((k - 3) // 2,)] = c
    return Polynomial(1, u), Polynomial(1, v)


class CounterexampleCertificate(object):

    def __init__(self):
        self.n = None
        self.t = None
        self.delta = None
        self.seed = None
        self.lifted_even = None
        self.lifted_curve = None
        self.eigenvalues: Dict[str, float] = {}
        self.thresholds: Dict[str, float] = {}
        self.witness = None
        self.annihilation: Dict[str, float] = {}
        self.curve_points = 0
        self.curve_min_x1 = None
        self.legs: Dict[str, bool] = {}
        self.is_counterexample = False
        self.note = None

    @property
    def passed(self) -> bool:
        return all(self.legs.values())

    def to_json(self) -> dict:
        return {
            'n': self.n,
            't': self.t,
            'delta': self.delta,
            'seed': self.seed.m.tolist() if self.seed is not None else None,
            'lifted_even': self.lifted_even.m.tolist() if self.lifted_even is not None else None,
            'lifted_curve': self.lifted_curve.to_json() if self.lifted_curve is not None else None,
            'eigenvalues': dict(self.eigenvalues),
            'thresholds': dict(self.thresholds),
            'L2_x1': self.witness,
            'annihilation': dict(self.annihilation),
            'curve_points': self.curve_points,
            'curve_min_x1': self.curve_min_x1,
            'legs': dict(self.legs),
            'is_counterexample': self.is_counterexample,
            'note': self.note,
            'passed': self.passed,
        }


def _leg(cert: CounterexampleCertificate, name: str, ok: bool, message: str):
    cert.legs[name] = bool(ok)
    if not ok:
        logging.info(f'leg {name} fails: {message}')
        raise VerificationError(name, message, cert)


def _psd_leg(cert: CounterexampleCertificate, name: str, mat: np.ndarray, tol: Tolerance):
    eig = eigvalsh(mat)
    cert.eigenvalues[name] = float(eig[0])
    cert.thresholds[name] = tol.threshold(np.max(np.abs(eig)))
    _leg(cert, name, eig[0] >= -cert.thresholds[name], f'min eigenvalue {eig[0]:.6g}')


def _curve_legs(cert: CounterexampleCertificate, l2: MomentFunctional, t: int, tol: Tolerance):
    if t < 0:
        raise ArgumentError(f'Level t must be >= 0: {t}')
    if l2.level_for() < t:
        raise DegreeError(f'M_{t}(L2) needs weighted degree {6 * t}, only {l2.budget} stored')
    cert.lifted_curve = l2
    _psd_leg(cert, 'moment_matrix', l2.moment_matrix(t).entries, tol)

    eq = cusp_equation()
    x1, x2 = Polynomial.variables(2)
    values = {}
    for label, r in (('1', 1.0), ('x1', x1), ('x2', x2)):
        values[label] = abs(l2.apply(eq * r))
    square = l2.ideal_annihilation_check(eq, ANNIHILATION)
    values['square'] = square.square_value
    cert.annihilation = values
    limit = square.threshold
    _leg(cert, 'annihilation', all(v <= limit for v in values.values()),
         f'L2 does not vanish on (x1^3 - x2^2): {values}')

    # the parametrization (s^2, s^3) of the lift lies on the curve exactly
    s = Polynomial.variable(1, 0)
    on_curve = eq.compose([s ** 2, s ** 3]).is_zero()
    # x1 >= 0 on curve points found by Newton projection from the whole box, x1 < 0 included;
    # on the thickened curve x1^3 >= -CURVE
    batch = cusp().set.sample(CURVE_BOX, CURVE_POINTS, seed=0, project_onto=(eq,))
    cert.curve_points = len(batch)
    cert.curve_min_x1 = float(np.min(batch.points[:, 0])) if len(batch) else None
    floor = -CURVE.value ** (1.0 / 3.0)
    _leg(cert, 'curve', on_curve and len(batch) > 0 and cert.curve_min_x1 >= floor,
         f'x1 = {cert.curve_min_x1} below {floor:.3g} at a sampled curve point')

    cert.witness = l2.apply(x1)


def verify(seed, t: int = 2, tol: Tolerance = None, delta: float = None) -> CounterexampleCertificate:
    """
    Certify the lifted functional L2 of a seed: both Hankel legs of the seed, M_t(L2) >= 0,
    L2 vanishing on the cusp ideal, x1 >= 0 along the curve, and L2(x1) = -delta < 0.
    :raise DegreeError: 6t exceeds the lifted budget 4n
    :raise VerificationError: the first failing leg, with the partial certificate
    """
    tol = as_tolerance(tol, SEED)
    m = as_vector(seed)
    if 6 * t > 4 * m.n:
        raise DegreeError(f'M_{t}(L2) needs 6t = {6 * t} <= 4n = {4 * m.n}')
    delta = -float(m[1]) if delta is None else float(delta)
    cert = CounterexampleCertificate()
    cert.n, cert.t, cert.delta, cert.seed = m.n, t, delta, m
    _psd_leg(cert, 'hankel', m.hankel(), tol)
    _psd_leg(cert, 'localized', localized_hankel(m, _x3()), tol)
    cert.lifted_even = lift_even(m)
    _curve_legs(cert, lift_curve(cert.lifted_even), t, tol)
    if delta > 0:
        _leg(cert, 'witness', cert.witness <= -delta + tol.value,
             f'L2(x1) = {cert.witness:.6g} is not below -delta = {-delta:g}')
        cert.is_counterexample = True
    else:
        cert.legs['witness'] = True
        cert.note = NOT_A_COUNTEREXAMPLE
    logging.info(f'certificate n={m.n} t={t}: L2(x1) = {cert.witness:.6g}')
    return cert


def verify_functional(l2: MomentFunctional, t: int = 2, tol: Tolerance = None) -> CounterexampleCertificate:
    """
    The L2 legs alone, for any functional on R[x1, x2]. is_counterexample is set only when
    M_t(L2) >= 0 holds and L2(x1) < 0, the sign x1 never takes on the curve.
    """
    if l2.dim != 2:
        raise ArgumentError(f'Expected a functional on two variables, got dimension {l2.dim}')
    tol = as_tolerance(tol, SEED)
    cert = CounterexampleCertificate()
    cert.t = t
    _curve_legs(cert, l2, t, tol)
    cert.is_counterexample = cert.witness < -tol.value
    if not cert.is_counterexample:
        cert.note = f'L2(x1)={cert.witness:.6g} >= 0, not a counterexample'
    return cert


def counterexample(spec: SeedSpec = None, t: int = 2, warm_start=None) -> CounterexampleCertificate:
    """find_seed, lift_even, lift_curve and verify in one go."""
    spec = spec or SeedSpec()
    if 6 * t > 4 * spec.n:
        raise DegreeError(f'M_{t}(L2) needs 6t = {6 * t} <= 4n = {4 * spec.n}')
    seed = find_seed(spec, warm_start)
    return verify(seed, t, spec.tol, spec.delta)

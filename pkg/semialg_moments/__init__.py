from .polyring import Monomial, Polynomial, mono_basis
from .measure import AtomicMeasure
from .semialg import SemiAlgebraicSet, BoundedPolySpec, FiberProblem, fiber_problem, tube_set
from .catalog import Fixture, catalog, get_fixture
from .functional import MomentFunctional, functional_from_measure
from .univariate import MomentVector1D, hankel_min_eig, localized_hankel_min_eig, quadrature_atoms, line_restriction
from .fiber import FiberPipeline, pushforward, fiber_functionals, disintegration_residual, fiber_pipeline
from .counterexample import SeedSpec, find_seed, lift_even, lift_curve, verify, verify_functional

__version__ = '0.1'

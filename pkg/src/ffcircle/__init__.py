"""ffcircle: an exact-arithmetic laboratory for the two-dimensional Farey
dissection and circle method over F_q[t].

The package verifies, at desk scale and in exact arithmetic, the
constructive machinery behind point counting on intersections of a cubic
and a quadric hypersurface over F_q(t): the lopsided dissection of the unit
torus squared, complete exponential sums and their identities, oscillatory
integrals as finite Haar averages, and the end-to-end agreement between
brute-force counts and the dissection decomposition.
"""

from .algebra import (
    FieldCtx,
    Laurent,
    NormValue,
    Poly,
    laurent_split,
    poly_gcd,
    poly_norm,
    primes_by_degree,
    rational_to_laurent,
)
from .cyc import CycValue
from .character import (
    Ball,
    LinearPsiPhase,
    haar_average,
    psi_eval,
    required_resolution,
)
from .errors import BudgetError, ConfigError, FFCircleError, PrecisionError

__version__ = "0.1.0"

__all__ = [
    "FieldCtx",
    "Poly",
    "NormValue",
    "Laurent",
    "CycValue",
    "Ball",
    "LinearPsiPhase",
    "poly_norm",
    "poly_gcd",
    "laurent_split",
    "primes_by_degree",
    "rational_to_laurent",
    "psi_eval",
    "required_resolution",
    "haar_average",
    "FFCircleError",
    "PrecisionError",
    "BudgetError",
    "ConfigError",
    "__version__",
]

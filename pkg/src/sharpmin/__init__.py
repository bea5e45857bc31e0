"""Local-minimality analysis of bivariate semi-algebraic functions.

Given a polynomial f (or the absolute value of one) and a base point, the
library builds the tangency variety of f at the point, traces its branches
across a ladder of shrinking circles, fits the leading growth exponent and
coefficient of each branch, and classifies the point as an isolated local
minimizer, a non-isolated one, or not a minimizer at all.  For isolated
minimizers it reports the sharp growth order, the matching Lojasiewicz
exponent and subregularity order, and verifies the associated inequalities
by dense sampling.
"""

__version__ = "0.1.0"

from .branchtrack import (  # noqa: E402,F401
    Branch,
    RadiusLadder,
    Trace,
    branch_values,
    build_ladder,
    fit_trace,
    trace,
)
from .classify import (  # noqa: F401
    INCONCLUSIVE,
    ISOLATED_LOCAL_MIN,
    LOCAL_MIN_NONISOLATED,
    NOT_LOCAL_MIN,
    ClassificationReport,
    classify,
    sharp_order_test,
)
from .cli import AnalysisReport, RunConfig, emit_csv, run  # noqa: F401
from .expansion import FitResult, fit, snap_rational  # noqa: F401
from .oracle import PsiSample, fit_psi, psi  # noqa: F401
from .polynomial import Interval, Polynomial, parse, parse_rational  # noqa: F401
from .realroots import RootBox, UniPoly, refine, squarefree, sturm_isolate  # noqa: F401
from .tangency import (  # noqa: F401
    FunctionModel,
    TangencyPoint,
    TangencyPolynomial,
    abs_model,
    circle_slice,
    slope,
    smooth_model,
    tangency_polynomial,
)
from .verify import InequalityProbe, counterexample_probe, probe  # noqa: F401

"""hypdet: spectral determinants on model hyperbolic ends, exact assembly
of the glued determinant, and the arithmetic special value at s = 1.

The package has three layers:

- exact bookkeeping (constfield): rational linear combinations of a fixed
  basis of transcendental constants, with rewrite rules and high-precision
  evaluation;
- analytic models (specfun, cusp, cone, surgery): special functions,
  eigenvalue scans and spectral zeta functions of the model cusp and cone,
  and the symbolic assembly in which all boundary divergences cancel;
- arithmetic (qforms, x1arith): the discriminant spectrum behind the
  geodesic product for Z(s), and the closed form of log Z'(1) for the
  modular group solved from the arithmetic degree identity.
"""

__version__ = "0.1.0"

from .constfield import (
    AsymptoticExpansion,
    ConstExpr,
    SymLinear,
    asym_substitute,
    const,
    const_eval,
    const_eval_mpf,
    const_reduce,
    log_frac,
    log_gamma_frac,
    log_int,
    term,
    zero,
)
from .cone import (
    ModelCone,
    cone_contour_sum,
    cone_desingularization_check,
    cone_logdet_asymptotic,
    cone_special_value,
    cone_zeta_direct,
    eta_from_r,
    r_from_eta,
    scan_cone_eigenvalues,
)
from .cusp import (
    ModelCusp,
    cusp_contour_sum,
    cusp_counting,
    cusp_logdet_asymptotic,
    cusp_warm_cache,
    cusp_zeta_direct,
    scan_cusp_eigenvalues,
)
from .errors import HypdetError
from .qforms import (
    DiscriminantRecord,
    DiscriminantTable,
    class_number,
    discriminant_table,
    is_discriminant,
    pell_fundamental,
    sarnak_log_z,
    write_discriminant_csv,
    zprime1_estimate,
)
from .specfun import DEFAULT_PRECISION, Precision
from .surgery import (
    FuchsianSignature,
    cgamma_direct,
    cgamma_from_assembly,
    format_signature,
    hyperbolic_volume,
    parse_signature,
    reconcile,
)
from .x1arith import X1Data, finite_intersections, solve_special_value

__all__ = [
    "__version__",
    "AsymptoticExpansion", "ConstExpr", "SymLinear", "asym_substitute",
    "const", "const_eval", "const_eval_mpf", "const_reduce", "log_frac",
    "log_gamma_frac", "log_int", "term", "zero",
    "ModelCone", "cone_contour_sum", "cone_desingularization_check",
    "cone_logdet_asymptotic", "cone_special_value", "cone_zeta_direct",
    "eta_from_r", "r_from_eta", "scan_cone_eigenvalues",
    "ModelCusp", "cusp_contour_sum", "cusp_counting",
    "cusp_logdet_asymptotic", "cusp_warm_cache", "cusp_zeta_direct",
    "scan_cusp_eigenvalues",
    "HypdetError",
    "DiscriminantRecord", "DiscriminantTable", "class_number",
    "discriminant_table", "is_discriminant", "pell_fundamental",
    "sarnak_log_z", "write_discriminant_csv", "zprime1_estimate",
    "DEFAULT_PRECISION", "Precision",
    "FuchsianSignature", "cgamma_direct", "cgamma_from_assembly",
    "format_signature", "hyperbolic_volume", "parse_signature", "reconcile",
    "X1Data", "finite_intersections", "solve_special_value",
]

"""Positive fixed points of rank-2 degenerate Hammerstein-type operators.

Library layout:

- ``kernels``: basis functions and rank-2 degenerate kernels on [0, 1]^2
- ``quadrature``: deterministic adaptive Gauss-Legendre integration
- ``reduction``: moment tableaux, the planar cubic map, the ratio quartic
- ``polyroots``: certified positive roots and the discriminant regimes
- ``fixpoints``: lifting roots to fixed functions, phase classification, scans
- ``gibbs``: operator residuals and the finite-tree compatibility oracle
- ``cli`` / ``plots``: command-line front end and figure rendering
"""

from .fixpoints import (
    THRESHOLD_RATIO,
    FixedPointDescriptor,
    RegimeClassification,
    ScanRow,
    classify_regime,
    fixed_functions,
    lift_root,
    rk_fixed_function,
    scan_phase,
)
from .gibbs import (
    DiscretizedSpin,
    GibbsCheckReport,
    ModelSpec,
    boundary_field,
    eq5_residual,
    hammerstein_residual,
    marginal_compatibility,
    rk_residual,
)
from .kernels import (
    BasisFunction,
    KernelSpec,
    eval_kernel,
    kernel_matrix,
    make_generic_kernel,
    make_paper_kernel,
)
from .polyroots import (
    DiscriminantReport,
    RootSet,
    classify_discriminant,
    positive_roots,
)
from .quadrature import (
    IntegralResult,
    IntegrationRequest,
    QuadratureError,
    integrate,
    integrate_fn,
    sup_norm,
)
from .reduction import (
    CoefficientTableau,
    Quartic,
    build_quartic,
    coefficients_closed_form,
    coefficients_quadrature,
    cubic_apply,
)

__version__ = "0.1.0"

"""Fixed functions of the degree-3 degenerate-kernel operator and phase scans.

Each positive quartic root lifts to a strictly positive planar fixed point
(x0, y0) and hence to a fixed function x0*phi1 + y0*phi2.  For the built-in
kernel family the solution count switches from one to three across the curve
a = 35*(44 + 15*pi)/318 * b, with the boundary itself carrying a coincident
double root.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .kernels import KernelSpec
from .polyroots import positive_roots
from .reduction import CoefficientTableau, build_quartic, coefficients_quadrature, cubic_apply

__all__ = [
    "FixedPointDescriptor",
    "RegimeClassification",
    "ScanRow",
    "THRESHOLD_RATIO",
    "lift_root",
    "fixed_functions",
    "classify_regime",
    "rk_fixed_function",
    "scan_phase",
    "scan_workers",
]

# Ratio a/b separating the one-solution and three-solution regimes.
THRESHOLD_RATIO = 35.0 * (44.0 + 15.0 * np.pi) / 318.0


class LiftError(RuntimeError):
    """Raised when a candidate root does not lift to a verified fixed point."""


@dataclass
class FixedPointDescriptor:
    """A verified positive fixed point.

    xi0 is the ratio y0/x0; f is the fixed function t -> x0*phi1(t) +
    y0*phi2(t) (None when no kernel spec was supplied).  cubic_residual is
    the planar fixed-point defect; hammerstein_residual is attached later by
    the verification layer.
    """

    xi0: float
    x0: float
    y0: float
    f: Optional[Callable] = None
    cubic_residual: float = 0.0
    hammerstein_residual: Optional[float] = None
    multiplicity: int = 1

    def to_json_dict(self) -> dict:
        return {
            "xi0": self.xi0,
            "x0": self.x0,
            "y0": self.y0,
            "cubic_residual": self.cubic_residual,
            "hammerstein_residual": self.hammerstein_residual,
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class RegimeClassification:
    a: float
    b: float
    threshold: float
    band: float
    regime: str
    expected_count: int

    def to_json_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "threshold": self.threshold,
            "band": self.band,
            "regime": self.regime,
            "expected_count": self.expected_count,
        }


def lift_root(
    tab: CoefficientTableau,
    xi0: float,
    spec: Optional[KernelSpec] = None,
    residual_gate: float = 1e-8,
    multiplicity: int = 1,
) -> FixedPointDescriptor:
    """Lift a positive quartic root to a planar fixed point and fixed function."""
    if not xi0 > 0.0:
        raise ValueError("xi0 must be positive")
    radicand = tab.a11 + 3.0 * tab.a12 * xi0 + 3.0 * tab.a21 * xi0**2 + tab.a22 * xi0**3
    if radicand <= 0.0:
        raise LiftError(f"nonpositive lift radicand {radicand!r} for a positive tableau")
    x0 = radicand**-0.5
    y0 = xi0 * x0
    cx, cy = cubic_apply(tab, x0, y0)
    residual = max(abs(cx - x0), abs(cy - y0))
    if residual > residual_gate:
        raise LiftError(
            f"cubic residual {residual:.3g} exceeds gate {residual_gate:g} for xi0={xi0!r}"
        )
    f = None
    if spec is not None:
        phi1, phi2 = spec.phi1, spec.phi2

        def f(t, x0=x0, y0=y0):
            return x0 * phi1(t) + y0 * phi2(t)

    return FixedPointDescriptor(
        xi0=xi0, x0=x0, y0=y0, f=f, cubic_residual=residual, multiplicity=multiplicity
    )


def fixed_functions(
    spec: KernelSpec,
    tol: float = 1e-10,
    root_tol: float = 1e-12,
    residual_gate: float = 1e-8,
) -> List[FixedPointDescriptor]:
    """Full pipeline: moment tableau, quartic, positive roots, lifted functions.

    Returns descriptors sorted by ratio; a double root is lifted once, so
    the list length is the distinct-solution count in {1, 2, 3}.
    """
    tab = coefficients_quadrature(spec, tol=tol)
    quartic = build_quartic(tab)
    roots = positive_roots(quartic, tol=root_tol)
    descriptors = [
        lift_root(tab, value, spec=spec, residual_gate=residual_gate, multiplicity=mult)
        for value, mult in roots.roots
    ]
    descriptors.sort(key=lambda d: d.xi0)
    if not 1 <= len(descriptors) <= 3:
        raise RuntimeError(f"fixed-point count {len(descriptors)} outside [1, 3]")
    return descriptors


def classify_regime(a: float, b: float, band: Optional[float] = None) -> RegimeClassification:
    """Place (a, b) relative to the solution-count threshold curve."""
    a = float(a)
    b = float(b)
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"parameters must be positive, got a={a}, b={b}")
    threshold = THRESHOLD_RATIO * b
    if band is None:
        band = 1e-8 * threshold
    if abs(a - threshold) <= band:
        regime, count = "two", 2
    elif a < threshold:
        regime, count = "unique", 1
    else:
        regime, count = "three", 3
    return RegimeClassification(
        a=a, b=b, threshold=threshold, band=band, regime=regime, expected_count=count
    )


def rk_fixed_function(desc: FixedPointDescriptor, k: int = 3) -> Callable:
    """Normalized k-th power of the fixed function; value 1 at the origin.

    The returned function is a fixed point of the ratio-power operator of
    order k whenever the descriptor's function is a fixed point of the
    degree-k integral operator.
    """
    if desc.f is None:
        raise ValueError("descriptor carries no fixed function (no kernel spec at lift time)")
    f0 = desc.f(0.0)
    if not f0 > 0.0:
        raise ValueError("fixed function must be positive at 0")

    def g(t):
        return (desc.f(t) / f0) ** k

    return g


@dataclass
class ScanRow:
    index: Tuple[int, int]
    a: float
    b: float
    threshold: float
    regime: str
    count: int
    xis: Tuple[float, ...]
    max_residual: float
    flagged: bool = False
    neighbor_counts: Optional[Tuple[int, int]] = None
    error: Optional[str] = None

    def to_json_dict(self) -> dict:
        xis = list(self.xis) + [None] * (3 - len(self.xis))
        return {
            "a": self.a,
            "b": self.b,
            "threshold": self.threshold,
            "regime": self.regime,
            "count": self.count,
            "xi1": xis[0],
            "xi2": xis[1],
            "xi3": xis[2],
            "max_residual": self.max_residual,
            "flagged": self.flagged,
            "error": self.error,
        }


def scan_workers() -> int:
    """Worker cap for scans, from the HAMMFIX_THREADS environment variable."""
    try:
        n = int(os.environ.get("HAMMFIX_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


def _scan_cell(index, a, b, tol, root_tol, make_kernel) -> ScanRow:
    regime = classify_regime(a, b)
    try:
        descs = fixed_functions(make_kernel(a, b), tol=tol)
    except Exception as exc:  # per-cell failures are recorded, not raised
        return ScanRow(
            index=index,
            a=a,
            b=b,
            threshold=regime.threshold,
            regime=regime.regime,
            count=0,
            xis=(),
            max_residual=float("nan"),
            flagged=True,
            error=str(exc),
        )
    row = ScanRow(
        index=index,
        a=a,
        b=b,
        threshold=regime.threshold,
        regime=regime.regime,
        count=len(descs),
        xis=tuple(d.xi0 for d in descs),
        max_residual=max(d.cubic_residual for d in descs),
    )
    if regime.regime == "two":
        # The boundary is measure-zero; also report the adjacent counts.
        below = len(fixed_functions(make_kernel(regime.threshold * (1 - 1e-6), b), tol=tol))
        above = len(fixed_functions(make_kernel(regime.threshold * (1 + 1e-6), b), tol=tol))
        row.neighbor_counts = (below, above)
    elif row.count != regime.expected_count:
        row.flagged = True
    return row


def scan_phase(
    a_range: Tuple[float, float],
    b_range: Tuple[float, float],
    a_steps: int,
    b_steps: int = 1,
    tol: float = 1e-10,
    root_tol: float = 1e-12,
    make_kernel=None,
) -> List[ScanRow]:
    """Grid scan of the fixed-point count over positive (a, b) ranges."""
    from .kernels import make_paper_kernel

    if make_kernel is None:
        make_kernel = make_paper_kernel
    if a_steps < 1 or b_steps < 1:
        raise ValueError("step counts must be positive")
    if min(a_range) <= 0.0 or min(b_range) <= 0.0:
        raise ValueError("scan ranges must be positive")
    a_vals = np.linspace(a_range[0], a_range[1], a_steps)
    b_vals = np.linspace(b_range[0], b_range[1], b_steps)
    cells = [
        ((i, j), a_vals[i], b_vals[j]) for j in range(b_steps) for i in range(a_steps)
    ]
    workers = scan_workers()
    if workers == 1:
        rows = [_scan_cell(idx, a, b, tol, root_tol, make_kernel) for idx, a, b in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(lambda c: _scan_cell(c[0], c[1], c[2], tol, root_tol, make_kernel), cells)
            )
    rows.sort(key=lambda r: r.index)
    return rows

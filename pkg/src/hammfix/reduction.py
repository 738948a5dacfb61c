"""Reduction of the degree-3 degenerate-kernel operator to a planar cubic map.

For a kernel K(t, u) = phi1(t)psi1(u) + phi2(t)psi2(u) the fixed functions of
f -> int K(t, u) f(u)^3 du are combinations x*phi1 + y*phi2 whose weights are
fixed points of a homogeneous cubic map on the plane.  The eight coefficients
of that map are moment integrals of the basis functions; for the built-in
kernel family they also have closed forms, linear in (a, b).  The ratio
xi = y/x of any positive fixed point is a root of a quartic assembled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .kernels import KernelSpec
from .quadrature import IntegrationRequest, QuadratureError, integrate

__all__ = [
    "CoefficientTableau",
    "Quartic",
    "coefficients_quadrature",
    "coefficients_closed_form",
    "build_quartic",
    "cubic_apply",
]

_ENTRY_NAMES = ("a11", "a12", "a21", "a22", "b11", "b12", "b21", "b22")


@dataclass(frozen=True)
class CoefficientTableau:
    """The eight cubic-map coefficients with provenance and error bound.

    Entry a_ij weights the x-row, b_ij the y-row.  All entries must be
    strictly positive.  For mirror-symmetric kernels the b-row is the
    reversed a-row (b11=a22, b12=a21, b21=a12, b22=a11) up to error_bound.
    """

    a11: float
    a12: float
    a21: float
    a22: float
    b11: float
    b12: float
    b21: float
    b22: float
    provenance: str = "quadrature"
    error_bound: float = 0.0

    def __post_init__(self):
        for name in _ENTRY_NAMES:
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise ValueError(f"tableau entry {name} must be strictly positive, got {v!r}")
        if self.error_bound < 0.0:
            raise ValueError("error_bound must be nonnegative")

    def entries(self) -> dict:
        return {name: getattr(self, name) for name in _ENTRY_NAMES}

    def a_row(self) -> Tuple[float, float, float, float]:
        return (self.a11, self.a12, self.a21, self.a22)

    def b_row(self) -> Tuple[float, float, float, float]:
        return (self.b11, self.b12, self.b21, self.b22)

    def mirror_defect(self) -> float:
        """Largest violation of the reversed-row identities."""
        return max(
            abs(self.b11 - self.a22),
            abs(self.b12 - self.a21),
            abs(self.b21 - self.a12),
            abs(self.b22 - self.a11),
        )

    def is_mirror_symmetric(self, rel_tol: float = 1e-6) -> bool:
        scale = max(self.entries().values())
        return self.mirror_defect() <= rel_tol * scale + 10.0 * self.error_bound

    def to_json_dict(self) -> dict:
        d = dict(self.entries())
        d["provenance"] = self.provenance
        d["error_bound"] = self.error_bound
        return d


@dataclass(frozen=True)
class Quartic:
    """Coefficients of the ratio quartic mu0*x^4 + mu1*x^3 + 3*mu2*x^2 + mu3*x + mu4.

    Note the factor 3 on mu2: it is stored un-multiplied, matching the
    tableau combination mu2 = a12 - b21.  For positive tableaux mu0 > 0 and
    mu4 < 0, so at least one positive root always exists.
    """

    mu0: float
    mu1: float
    mu2: float
    mu3: float
    mu4: float
    source: Optional[CoefficientTableau] = None

    def coeffs(self) -> np.ndarray:
        """Descending monomial coefficients [mu0, mu1, 3*mu2, mu3, mu4]."""
        return np.array([self.mu0, self.mu1, 3.0 * self.mu2, self.mu3, self.mu4])

    def __call__(self, x):
        return np.polyval(self.coeffs(), x)

    def derivative(self, x):
        return np.polyval(np.polyder(self.coeffs()), x)

    def to_json_dict(self) -> dict:
        return {
            "mu0": self.mu0,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "mu3": self.mu3,
            "mu4": self.mu4,
        }


def _moment_integrands(spec: KernelSpec):
    phi1, phi2 = spec.phi1, spec.phi2
    for psi, row in ((spec.psi1, "a"), (spec.psi2, "b")):
        for p, col in ((3, "11"), (2, "12"), (1, "21"), (0, "22")):
            name = row + col

            def integrand(u, psi=psi, p=p):
                return psi(u) * phi1(u) ** p * phi2(u) ** (3 - p)

            yield name, integrand


def coefficients_quadrature(spec: KernelSpec, tol: float = 1e-10) -> CoefficientTableau:
    """Compute all eight coefficients by adaptive quadrature at tolerance tol."""
    breakpoints = tuple(sorted(set(spec.t_breakpoints) | set(spec.u_breakpoints)))
    values = {}
    for name, integrand in _moment_integrands(spec):
        try:
            res = integrate(
                IntegrationRequest(integrand=integrand, breakpoints=breakpoints, abs_tol=tol)
            )
        except QuadratureError as exc:
            raise QuadratureError(f"coefficient {name}: {exc}") from exc
        values[name] = res.value
    return CoefficientTableau(provenance="quadrature", error_bound=8.0 * tol, **values)


def coefficients_closed_form(a: float, b: float) -> CoefficientTableau:
    """Closed-form coefficients of the built-in (a, b) kernel family.

    Zero values of a or b are admitted (one column of the linear forms),
    negatives are rejected.
    """
    a = float(a)
    b = float(b)
    if a < 0.0 or b < 0.0:
        raise ValueError(f"parameters must be nonnegative, got a={a}, b={b}")
    pi = np.pi
    a11 = 527.0 * a / (280.0 * pi) + 17.0 * b / (12.0 * pi) + b / 2.0
    a12 = 29.0 * a / (40.0 * pi) + 3.0 * b / (4.0 * pi) + b / 4.0
    a21 = 7.0 * a / (24.0 * pi) + 3.0 * b / (4.0 * pi) + b / 4.0
    a22 = a / (8.0 * pi) + 17.0 * b / (12.0 * pi) + b / 2.0
    err = 8.0 * np.finfo(float).eps * max(a11, a12, a21, a22)
    return CoefficientTableau(
        a11=a11,
        a12=a12,
        a21=a21,
        a22=a22,
        b11=a22,
        b12=a21,
        b21=a12,
        b22=a11,
        provenance="closed_form",
        error_bound=err,
    )


def build_quartic(tab: CoefficientTableau) -> Quartic:
    """Assemble the ratio quartic from a tableau.

    Always uses the general b-row combination for the linear coefficient
    (a11 - 3*b12); for mirror-symmetric tableaux this equals a11 - 3*a21,
    which is the combination consistent with the factorization
    (x-1)(x+1)(a22*x^2 + (3*a21-a11)*x + a22).
    """
    return Quartic(
        mu0=tab.a22,
        mu1=3.0 * tab.a21 - tab.b22,
        mu2=tab.a12 - tab.b21,
        mu3=tab.a11 - 3.0 * tab.b12,
        mu4=-tab.b11,
        source=tab,
    )


def cubic_apply(tab: CoefficientTableau, x: float, y: float) -> Tuple[float, float]:
    """Apply the homogeneous cubic map to (x, y)."""
    first = tab.a11 * x**3 + 3.0 * tab.a12 * x**2 * y + 3.0 * tab.a21 * x * y**2 + tab.a22 * y**3
    second = tab.b11 * x**3 + 3.0 * tab.b12 * x**2 * y + 3.0 * tab.b21 * x * y**2 + tab.b22 * y**3
    return (first, second)

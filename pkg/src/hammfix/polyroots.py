"""Certified positive real roots of the ratio quartic.

Two paths: mirror-symmetric tableaux get the structural factorization
(x-1)(x+1)(c*x^2 + B*x + c) with the palindromic quadratic solved in closed
form; everything else goes through Sturm-sequence isolation on (0, R] with a
Cauchy root bound, bisection, and Newton polish.  The quadratic's
discriminant sign also classifies the solution-count regime.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .reduction import CoefficientTableau, Quartic

__all__ = [
    "RootSet",
    "DiscriminantReport",
    "TableauSymmetryError",
    "RootIsolationError",
    "positive_roots",
    "classify_discriminant",
    "default_discriminant_band",
    "cauchy_bound",
]


class TableauSymmetryError(ValueError):
    """Raised when a symmetric-only operation meets a non-symmetric tableau."""


class RootIsolationError(RuntimeError):
    """Raised when root isolation cannot be certified within budget."""


@dataclass(frozen=True)
class RootSet:
    """Positive roots as (value, multiplicity) pairs, sorted by value.

    For the factored path the deflated unit root and the quadratic factor's
    roots are reported as separate entries, one per factor root; at the exact
    regime boundary the quadratic's double root coincides with 1 and the set
    then contains two entries with (numerically) equal values.
    """

    roots: Tuple[Tuple[float, int], ...]
    residual_bound: float
    method: str

    def values(self) -> Tuple[float, ...]:
        return tuple(v for v, _ in self.roots)

    def count(self) -> int:
        return len(self.roots)

    def to_json_dict(self) -> dict:
        return {
            "roots": [{"xi": v, "mult": m} for v, m in self.roots],
            "residual_bound": self.residual_bound,
            "method": self.method,
        }


@dataclass(frozen=True)
class DiscriminantReport:
    """Discriminant of the palindromic quadratic factor and its regime.

    D = B^2 - 4c^2 with B = 3*a21 - a11 and c = a22.  factor_neg = B - 2c is
    always negative for positive tableaux; factor_pos = B + c carries the
    sign convention used in the count argument.  The report cross-checks
    D against the product (B - 2c)(B + 2c).
    """

    D: float
    factor_neg: float
    factor_pos: float
    regime: str
    eps: float


def default_discriminant_band(tab: CoefficientTableau) -> float:
    """Width of the near-zero band for the discriminant classification."""
    return 1e-9 * (4.0 * tab.a22**2)


def classify_discriminant(tab: CoefficientTableau, eps: Optional[float] = None) -> DiscriminantReport:
    """Classify the quadratic-factor discriminant of a symmetric tableau."""
    if not tab.is_mirror_symmetric():
        raise TableauSymmetryError(
            f"discriminant classification needs a mirror-symmetric tableau "
            f"(defect {tab.mirror_defect():.3g})"
        )
    if eps is None:
        eps = default_discriminant_band(tab)
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    B = 3.0 * tab.a21 - tab.a11
    c = tab.a22
    D = B * B - 4.0 * c * c
    D_factored = (B - 2.0 * c) * (B + 2.0 * c)
    if abs(D - D_factored) > 1e-12 * max(1.0, abs(D)):
        raise RootIsolationError("discriminant cross-check failed")
    if abs(D) <= eps:
        regime = "zero_within_eps"
    elif D < 0.0:
        regime = "negative"
    else:
        regime = "positive"
    return DiscriminantReport(D=D, factor_neg=B - 2.0 * c, factor_pos=B + c, regime=regime, eps=eps)


def cauchy_bound(coeffs: np.ndarray) -> float:
    """Upper bound 1 + sum|c_i|/|c_0| on the magnitude of all roots."""
    return 1.0 + float(np.sum(np.abs(coeffs[1:])) / abs(coeffs[0]))


def _newton_polish(q: Quartic, x0: float, tol: float, iters: int = 60) -> float:
    x = x0
    best = x0
    best_val = abs(q(x0))
    for _ in range(iters):
        d = q.derivative(x)
        if d == 0.0:
            break
        step = q(x) / d
        x -= step
        v = abs(q(x))
        if v < best_val:
            best, best_val = x, v
        if abs(step) <= tol * max(1.0, abs(x)):
            break
    return best


def _polyval(c, x):
    return np.polyval(c, x)


def _sturm_chain(coeffs: np.ndarray):
    scale = np.max(np.abs(coeffs))
    chain = [np.asarray(coeffs, float), np.polyder(np.asarray(coeffs, float))]
    while len(chain[-1]) > 1:
        _, rem = np.polydiv(chain[-2], chain[-1])
        rem = np.trim_zeros(-rem, "f")
        if rem.size == 0 or np.max(np.abs(rem)) <= 1e-12 * scale:
            break
        chain.append(rem)
    return chain


def _sign_changes(chain, x: float) -> int:
    signs = []
    for p in chain:
        v = _polyval(p, x)
        if v != 0.0:
            signs.append(1 if v > 0.0 else -1)
    return sum(1 for s1, s2 in zip(signs, signs[1:]) if s1 != s2)


def _isolate_sturm(coeffs: np.ndarray, lo: float, hi: float, tol: float):
    """Isolating intervals for the distinct real roots of a square-free poly."""
    chain = _sturm_chain(coeffs)
    if len(chain[-1]) > 1:
        raise RootIsolationError("polynomial is not square-free after reduction")

    results = []
    budget = [0]

    def recurse(a, b, na, nb):
        n = na - nb
        if n == 0:
            return
        if n == 1:
            results.append((a, b))
            return
        budget[0] += 1
        if budget[0] > 200:
            raise RootIsolationError("isolation budget exceeded")
        mid = 0.5 * (a + b)
        # Nudge off an exact root of the chain head.
        while _polyval(coeffs, mid) == 0.0 and budget[0] < 250:
            mid += (b - a) * 1e-9
            budget[0] += 1
        nm = _sign_changes(chain, mid)
        recurse(a, mid, na, nm)
        recurse(mid, b, nm, nb)

    recurse(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))
    return sorted(results)


def _bisect_root(coeffs: np.ndarray, lo: float, hi: float, tol: float) -> float:
    flo = _polyval(coeffs, lo)
    fhi = _polyval(coeffs, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        # No sign change on the isolating interval (even multiplicity):
        # fall back to the extremum of the interval.
        return 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = _polyval(coeffs, mid)
        if fm == 0.0 or (hi - lo) <= tol * max(1.0, abs(mid)):
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _multiplicity(q: Quartic, x: float) -> int:
    coeffs = q.coeffs()
    scale = np.max(np.abs(coeffs)) * max(1.0, abs(x)) ** 4
    m = 0
    p = coeffs
    while len(p) > 1 and abs(_polyval(p, x)) <= 1e-7 * scale:
        m += 1
        p = np.polyder(p)
    return max(m, 1)


def _general_positive_roots(q: Quartic, tol: float) -> RootSet:
    coeffs = q.coeffs()
    if coeffs[0] == 0.0:
        raise ValueError("degenerate leading coefficient")
    R = cauchy_bound(coeffs)

    # Square-free reduction via the Sturm chain terminator.
    chain = _sturm_chain(coeffs)
    work = coeffs
    if len(chain[-1]) > 1:
        work, _ = np.polydiv(coeffs, chain[-1])

    lo = tol  # strictly positive roots only
    intervals = _isolate_sturm(work, lo, R, tol)
    roots = []
    for a, b in intervals:
        x = _bisect_root(work, a, b, tol)
        x = _newton_polish(q, x, tol)
        if x > 0.0:
            roots.append((float(x), _multiplicity(q, x)))
    roots.sort()
    residual = max((abs(q(v)) for v, _ in roots), default=0.0)
    return RootSet(roots=tuple(roots), residual_bound=residual, method="general")


def _factored_positive_roots(q: Quartic, tab: CoefficientTableau, tol: float) -> RootSet:
    report = classify_discriminant(tab)
    B = 3.0 * tab.a21 - tab.a11
    c = tab.a22
    entries = [(float(_newton_polish(q, 1.0, tol)), 1)]
    if report.regime == "positive":
        sq = np.sqrt(report.D)
        r1 = (-B - np.copysign(sq, B)) / (2.0 * c)
        r2 = 1.0 / r1  # the quadratic is palindromic: roots come in reciprocal pairs
        for r in (r1, r2):
            if r > 0.0:
                entries.append((float(_newton_polish(q, r, tol)), 1))
    elif report.regime == "zero_within_eps":
        r = -B / (2.0 * c)
        if r > 0.0:
            entries.append((float(r), 2))
    entries.sort()
    residual = max(abs(q(v)) for v, _ in entries)
    return RootSet(roots=tuple(entries), residual_bound=residual, method="factored_symmetric")


def positive_roots(q: Quartic, tol: float = 1e-12) -> RootSet:
    """All positive real roots of the quartic, refined to relative step tol."""
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if q.mu0 == 0.0:
        raise ValueError("degenerate leading coefficient")
    if q.source is not None and q.source.is_mirror_symmetric():
        return _factored_positive_roots(q, q.source, tol)
    return _general_positive_roots(q, tol)

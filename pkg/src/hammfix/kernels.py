"""Rank-2 degenerate kernels on the unit square.

A kernel here is K(t, u) = phi1(t)*psi1(u) + phi2(t)*psi2(u) built from four
positive basis functions on [0, 1].  The built-in family pairs two sine bumps
(the t-side factors) with two cosine caps parameterized by (a, b) (the u-side
factors); all four are piecewise closed forms with a single breakpoint at 1/2.
Basis functions carry their breakpoints explicitly so that quadrature can
split integration intervals at the kinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = [
    "BasisFunction",
    "KernelSpec",
    "bump_left",
    "bump_right",
    "cap_left",
    "cap_right",
    "user_basis",
    "make_paper_kernel",
    "make_generic_kernel",
    "eval_kernel",
    "kernel_matrix",
    "kernel_params_json",
]


def _check_unit_interval(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return arr


@dataclass(frozen=True)
class BasisFunction:
    """A nonnegative function on [0, 1] with declared interior breakpoints."""

    kind: str
    fn: Callable[[np.ndarray], np.ndarray]
    breakpoints: Tuple[float, ...] = ()
    params: Tuple[float, ...] = ()

    def __call__(self, t):
        arr = _check_unit_interval(t, "t")
        out = np.asarray(self.fn(arr), dtype=float)
        if arr.ndim == 0:
            return float(out)
        return out


def bump_left() -> BasisFunction:
    """Sine bump on the first half interval, constant 1/2 on the second."""

    def f(u):
        return np.where(u <= 0.5, 0.5 + np.sin(2.0 * np.pi * u), 0.5)

    return BasisFunction(kind="zeta1", fn=f, breakpoints=(0.5,))


def bump_right() -> BasisFunction:
    """Constant 1/2 on the first half interval, sine bump on the second."""

    def f(u):
        return np.where(u <= 0.5, 0.5, 0.5 - np.sin(2.0 * np.pi * u))

    return BasisFunction(kind="zeta2", fn=f, breakpoints=(0.5,))


def cap_left(a: float, b: float) -> BasisFunction:
    """Cosine cap of height a over a floor b on the first half interval."""

    def f(t):
        return np.where(t <= 0.5, a * np.cos(np.pi * t) + b, b)

    return BasisFunction(kind="F1", fn=f, breakpoints=(0.5,), params=(a, b))


def cap_right(a: float, b: float) -> BasisFunction:
    """Mirror image of cap_left: floor b first, cosine cap on the second half."""

    def f(t):
        return np.where(t <= 0.5, b, -a * np.cos(np.pi * t) + b)

    return BasisFunction(kind="F2", fn=f, breakpoints=(0.5,), params=(a, b))


def user_basis(fn, breakpoints=()) -> BasisFunction:
    """Wrap a caller-supplied evaluation rule with its breakpoint list."""
    bps = tuple(sorted(float(x) for x in breakpoints))
    if any(not (0.0 < x < 1.0) for x in bps):
        raise ValueError("breakpoints must lie strictly inside (0, 1)")
    return BasisFunction(kind="user-defined", fn=fn, breakpoints=bps)


@dataclass(frozen=True)
class KernelSpec:
    """Rank-2 degenerate kernel phi1(t)psi1(u) + phi2(t)psi2(u).

    For the built-in family (``family == "paper"``) the t-side factors are
    the sine bumps and the u-side factors are the cosine caps with
    parameters (a, b).  With that assignment the family's coefficient
    integrals are linear in (a, b) and its fixed functions are bump
    combinations, which is the orientation all downstream formulas assume.
    """

    phi1: BasisFunction
    phi2: BasisFunction
    psi1: BasisFunction
    psi2: BasisFunction
    family: str = "generic"
    a: Optional[float] = None
    b: Optional[float] = None

    @property
    def t_breakpoints(self) -> Tuple[float, ...]:
        return tuple(sorted(set(self.phi1.breakpoints) | set(self.phi2.breakpoints)))

    @property
    def u_breakpoints(self) -> Tuple[float, ...]:
        return tuple(sorted(set(self.psi1.breakpoints) | set(self.psi2.breakpoints)))

    def __call__(self, t, u):
        return eval_kernel(self, t, u)


def make_paper_kernel(a: float, b: float) -> KernelSpec:
    """Build the (a, b) kernel family member.

    Both parameters must be nonnegative and not both zero; zero values are
    admitted for testing individual coefficient columns, but strict kernel
    positivity (K >= b > 0) only holds for b > 0.
    """
    a = float(a)
    b = float(b)
    if not np.isfinite(a) or not np.isfinite(b):
        raise ValueError("kernel parameters must be finite")
    if a < 0.0 or b < 0.0:
        raise ValueError(f"kernel parameters must be nonnegative, got a={a}, b={b}")
    if a == 0.0 and b == 0.0:
        raise ValueError("kernel parameters a and b cannot both be zero")
    return KernelSpec(
        phi1=bump_left(),
        phi2=bump_right(),
        psi1=cap_left(a, b),
        psi2=cap_right(a, b),
        family="paper",
        a=a,
        b=b,
    )


def make_generic_kernel(phi1, phi2, psi1, psi2, grid_size: int = 64) -> KernelSpec:
    """Build a generic rank-2 kernel from four basis functions.

    The caller certifies positivity; a spot check on a grid_size x grid_size
    uniform grid rejects kernels that evaluate <= 0 anywhere on it.
    """
    spec = KernelSpec(phi1=phi1, phi2=phi2, psi1=psi1, psi2=psi2, family="generic")
    ts = np.linspace(0.0, 1.0, grid_size)
    mat = kernel_matrix(spec, ts, ts)
    if not np.all(np.isfinite(mat)):
        raise ValueError("generic kernel evaluates non-finite on the check grid")
    if np.min(mat) <= 0.0:
        i, j = np.unravel_index(np.argmin(mat), mat.shape)
        raise ValueError(
            f"generic kernel is not positive: K({ts[i]:.6f}, {ts[j]:.6f}) = {mat[i, j]:.6g}"
        )
    return spec


def eval_kernel(spec: KernelSpec, t, u):
    """Evaluate phi1(t)psi1(u) + phi2(t)psi2(u); arguments broadcast."""
    _check_unit_interval(t, "t")
    _check_unit_interval(u, "u")
    val = spec.phi1(t) * spec.psi1(u) + spec.phi2(t) * spec.psi2(u)
    if np.ndim(val) == 0:
        return float(val)
    return val


def kernel_matrix(spec: KernelSpec, t_nodes, u_nodes) -> np.ndarray:
    """Matrix K[i, j] = K(t_nodes[i], u_nodes[j])."""
    t_nodes = np.atleast_1d(np.asarray(t_nodes, dtype=float))
    u_nodes = np.atleast_1d(np.asarray(u_nodes, dtype=float))
    return np.outer(spec.phi1(t_nodes), spec.psi1(u_nodes)) + np.outer(
        spec.phi2(t_nodes), spec.psi2(u_nodes)
    )


def kernel_params_json(spec: KernelSpec) -> dict:
    """Serializable parameter record for a kernel."""
    if spec.family == "paper":
        return {"family": "paper", "a": spec.a, "b": spec.b}
    return {"family": "generic"}

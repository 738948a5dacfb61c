"""Operator residuals and the finite-tree compatibility oracle."""

import numpy as np
import pytest

from hammfix.fixpoints import fixed_functions, rk_fixed_function
from hammfix.gibbs import (
    DiscretizedSpin,
    EnumerationBudgetError,
    ModelSpec,
    boundary_field,
    eq5_residual,
    hammerstein_residual,
    marginal_compatibility,
    rk_residual,
)
from hammfix.kernels import make_paper_kernel


@pytest.fixture(scope="module")
def unit_case():
    spec = make_paper_kernel(1.0, 1.0)
    desc = fixed_functions(spec)[0]
    return spec, desc


def test_hammerstein_residual_at_fixed_point(unit_case):
    spec, desc = unit_case
    assert hammerstein_residual(spec, desc.f, k=3, tol=1e-9) < 1e-10


def test_hammerstein_residual_detects_non_fixed_point(unit_case):
    spec, desc = unit_case
    perturbed = lambda t: desc.f(t) + 0.1 * np.asarray(t, dtype=float)
    assert hammerstein_residual(spec, perturbed, k=3, tol=1e-9) > 1e-2


def test_rk_residual_at_lifted_function(unit_case):
    spec, desc = unit_case
    g = rk_fixed_function(desc, k=3)
    assert rk_residual(spec, g, k=3, tol=1e-9) < 1e-10


def test_model_spec_validation():
    spec = make_paper_kernel(1.0, 1.0)
    with pytest.raises(ValueError):
        ModelSpec(kernel=spec, k=1)
    with pytest.raises(ValueError):
        ModelSpec(kernel=spec, jbeta=0.0)
    with pytest.raises(ValueError):
        ModelSpec(kernel=spec, k=3, root_branching=2)
    assert ModelSpec(kernel=spec, k=3).root_branching == 4
    assert ModelSpec(kernel=spec, k=3, root_branching=3).root_branching == 3


def test_potential_reproduces_kernel():
    spec = make_paper_kernel(2.0, 1.0)
    model = ModelSpec(kernel=spec, k=3, jbeta=0.7)
    t, u = 0.3, 0.8
    assert np.exp(0.7 * model.potential(t, u)) == pytest.approx(spec(t, u), rel=1e-14)


def test_discretized_spin_gauss():
    spin = DiscretizedSpin.gauss(24)
    assert spin.m == 24
    assert spin.weights.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.all((spin.nodes > 0.0) & (spin.nodes < 1.0))
    assert np.all(np.diff(spin.nodes) > 0.0)
    # Gauss nodes integrate smooth functions accurately.
    approx = float(spin.weights @ np.sin(np.pi * spin.nodes))
    assert approx == pytest.approx(2.0 / np.pi, abs=1e-12)
    with pytest.raises(ValueError):
        DiscretizedSpin.gauss(1)


def test_discretized_spin_validation():
    with pytest.raises(ValueError):
        DiscretizedSpin(nodes=np.array([0.2, 0.8]), weights=np.array([0.5, 0.6]))
    with pytest.raises(ValueError):
        DiscretizedSpin(nodes=np.array([0.0, 0.8]), weights=np.array([0.5, 0.5]))


def test_boundary_field_zero_at_origin(unit_case):
    _, desc = unit_case
    h = boundary_field(desc.f)
    assert h(0.0) == pytest.approx(0.0, abs=1e-15)
    assert h(0.25) == pytest.approx(np.log(desc.f(0.25) / desc.f(0.0)), abs=1e-14)


def test_eq5_residual_scale_invariant(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3)
    g = rk_fixed_function(desc, k=3)
    assert eq5_residual(model, g) < 1e-10
    scaled = lambda t: 7.0 * g(t)
    assert eq5_residual(model, scaled) < 1e-10


def test_marginal_compatibility_fixed_point(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3)
    rep = marginal_compatibility(model, DiscretizedSpin.gauss(24), desc.f, n=1)
    assert rep.marginal_discrepancy < 1e-12
    assert rep.eq5_residual < 1e-8
    assert rep.root_branching == 4
    assert rep.root_field_exponent == pytest.approx(4.0 / 3.0)
    assert all(z > 0.0 for z in rep.Z_values)


def test_marginal_compatibility_both_root_conventions(unit_case):
    spec, desc = unit_case
    spin = DiscretizedSpin.gauss(16)
    for rb in (3, 4):
        model = ModelSpec(kernel=spec, k=3, root_branching=rb)
        rep = marginal_compatibility(model, spin, desc.f, n=1)
        assert rep.marginal_discrepancy < 1e-12, rb


def test_marginal_compatibility_depth_two(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3, root_branching=3)
    rep = marginal_compatibility(model, DiscretizedSpin.gauss(12), desc.f, n=2)
    assert rep.marginal_discrepancy < 1e-12
    assert rep.n == 2


def test_marginal_compatibility_rejects_non_fixed_point(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3)
    perturbed = lambda t: desc.f(t) + 0.1 * np.asarray(t, dtype=float)
    rep = marginal_compatibility(model, DiscretizedSpin.gauss(24), perturbed, n=1)
    assert rep.marginal_discrepancy > 1e-3
    assert rep.eq5_residual > 1e-3


def test_three_root_regime_all_fixed_points_compatible():
    spec = make_paper_kernel(12.0, 1.0)
    model = ModelSpec(kernel=spec, k=3)
    spin = DiscretizedSpin.gauss(16)
    for desc in fixed_functions(spec):
        rep = marginal_compatibility(model, spin, desc.f, n=1)
        # Asymmetric fixed points carry genuine m-dependent discretization
        # error (no symmetry cancellation), so the bound is looser here.
        assert rep.marginal_discrepancy < 1e-6, desc.xi0


def test_enumeration_budget(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3)
    big = DiscretizedSpin.gauss(128)
    with pytest.raises(EnumerationBudgetError):
        marginal_compatibility(model, big, desc.f, n=2)


def test_marginal_compatibility_validation(unit_case):
    spec, desc = unit_case
    model = ModelSpec(kernel=spec, k=3)
    with pytest.raises(ValueError):
        marginal_compatibility(model, DiscretizedSpin.gauss(8), desc.f, n=3)

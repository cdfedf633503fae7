import math

import numpy as np
import pytest

from sot import Kernel, ProblemInstance, interval_maxima
from sot.solvers import (BUDGET_EXHAUSTED, CONVERGED, SingularNodeSystemError, SolverOptions,
                         equioscillation_residual, find_equioscillation, maximize_min, minimize_max,
                         pattern_search, project)

from fixtures import step_instance
from oracles import chebyshev_reference

LOG = Kernel.log()


def test_residual_examples():
    assert equioscillation_residual(ProblemInstance.simple(LOG, 1), (0.5,)) == pytest.approx(0.0, abs=1e-15)
    r = equioscillation_residual(ProblemInstance.simple(LOG, 1), (0.3,))
    assert r == pytest.approx(math.log(0.7) - math.log(0.3), abs=1e-12)
    assert equioscillation_residual(ProblemInstance.simple(LOG, 2), (0.146447, 0.853553)) <= 1e-5
    nodes, _ = chebyshev_reference(2)
    assert equioscillation_residual(ProblemInstance.simple(LOG, 2), nodes) <= 1e-12
    with pytest.raises(SingularNodeSystemError):
        equioscillation_residual(step_instance(), (1 / 3,))


@pytest.mark.parametrize("n", [1, 2])
def test_find_equioscillation_chebyshev(n):
    res = find_equioscillation(ProblemInstance.simple(LOG, n))
    nodes, value = chebyshev_reference(n)
    assert res.status == CONVERGED and res.residual <= 1e-8
    assert list(res.nodes.nodes) == pytest.approx(nodes, abs=1e-7)
    assert res.value == pytest.approx(value, abs=1e-8)


def test_find_equioscillation_step_field():
    # every y < 2/3 is singular; the leveled system sits at 5/6 where m0 = m1 = ln(1/6)
    res = find_equioscillation(step_instance())
    assert res.status == CONVERGED
    assert res.nodes.nodes[0] == pytest.approx(5 / 6, abs=1e-8)
    assert res.value == pytest.approx(math.log(1 / 6), abs=1e-8)


def test_minimize_max_examples():
    assert minimize_max(ProblemInstance.simple(LOG, 1)).value == pytest.approx(math.log(0.5), abs=1e-9)
    assert minimize_max(ProblemInstance.simple(LOG, 2)).value == pytest.approx(math.log(1 / 8), abs=1e-7)
    res = minimize_max(ProblemInstance.simple(Kernel.power(0.5), 1))
    assert res.value == pytest.approx(math.sqrt(0.5), abs=1e-8)
    assert res.nodes.nodes[0] == pytest.approx(0.5, abs=1e-6)


def test_maximize_min_examples():
    assert maximize_min(ProblemInstance.simple(LOG, 1)).value == pytest.approx(math.log(0.5), abs=1e-8)
    assert maximize_min(ProblemInstance.simple(LOG, 2)).value == pytest.approx(math.log(1 / 8), abs=1e-6)


def test_maximize_min_zero_budget():
    inst = ProblemInstance.simple(LOG, 2)
    res = maximize_min(inst, SolverOptions(direct_search_budget=0))
    assert res.status == BUDGET_EXHAUSTED
    assert res.value == interval_maxima(inst, res.nodes).m_under


def test_solver_determinism():
    inst = ProblemInstance.simple(Kernel.log_shifted(0.1), 3, weights=(1.0, 0.5, 2.0))
    a = maximize_min(inst, SolverOptions(rng_seed=9, direct_search_budget=3000))
    b = maximize_min(inst, SolverOptions(rng_seed=9, direct_search_budget=3000))
    assert a.nodes == b.nodes and a.value == b.value


def test_multistart_agreement():
    # distinct starts converge to the same equioscillating system
    inst = ProblemInstance.simple(Kernel.power(0.5), 3, weights=(1.0, 0.7, 1.3))
    sols = [find_equioscillation(inst, start=s).nodes.nodes for s in
            [(0.1, 0.2, 0.3), (0.6, 0.7, 0.9), (0.2, 0.5, 0.8)]]
    for s in sols[1:]:
        assert s == pytest.approx(sols[0], abs=1e-6)


def test_pattern_search_quadratic():
    rng = np.random.default_rng(0)
    f = lambda y: (y[0] - 0.3) ** 2 + (y[1] - 0.6) ** 2
    best, val, evals, hit = pattern_search(f, (0.5, 0.5), 5000, rng)
    assert best == pytest.approx((0.3, 0.6), abs=1e-6)


def test_project():
    assert project((0.7, -0.2, 1.4)) == (0.0, 0.7, 1.0)


def test_option_validation():
    with pytest.raises(ValueError):
        SolverOptions(residual_tol=0)
    with pytest.raises(ValueError):
        SolverOptions(multistart=0)

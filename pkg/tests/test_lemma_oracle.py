import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sot import Kernel
from sot.lemmas import (HypothesisError, WideningParams, check_hypotheses, check_widening_part, kappa,
                        random_params, widening_sides)

from oracles import brute_widening

UNIT = WideningParams(1, 1, 0.1, 0.2, 0.6, 0.7)


def test_kappa_examples():
    assert kappa(UNIT) == pytest.approx(1.0, abs=1e-15)
    assert kappa(WideningParams(2, 1, 0.1, 0.2, 0.6, 0.7)) == pytest.approx(2.0)
    assert kappa(WideningParams(1, 1, 0.0, 0.3, 0.5, 1.0)) == pytest.approx(0.6)
    assert WideningParams.with_unit_kappa(2.0, 1.0, 0.4, 0.6, 0.8).kappa == pytest.approx(1.0)


def test_widening_sides_examples():
    lhs, rhs = widening_sides(Kernel.log(), UNIT, 0.05)
    assert lhs == pytest.approx(math.log(0.0325), abs=1e-12)
    assert rhs == pytest.approx(math.log(0.0825), abs=1e-12)
    lhs, rhs = widening_sides(Kernel.log(), UNIT, 0.4)
    assert lhs == pytest.approx(math.log(0.09)) and rhs == pytest.approx(math.log(0.04))
    assert lhs > rhs


def test_degenerate_params_rejected():
    with pytest.raises(HypothesisError):
        WideningParams(1, 1, 0.2, 0.2, 0.6, 0.6)
    with pytest.raises(HypothesisError):
        WideningParams(0, 1, 0.1, 0.2, 0.6, 0.7)


def test_part_c_unit_kappa_clean():
    rep = check_widening_part(Kernel.log(), UNIT, "c", 1000)
    assert rep.ok and rep.midpoint_margin > 0


def test_hypothesis_checks():
    # parts a and b need kappa >= 1 and a monotone kernel
    with pytest.raises(HypothesisError):
        check_hypotheses(Kernel.log(), WideningParams(1, 1, 0.15, 0.2, 0.6, 0.7), "a")
    with pytest.raises(HypothesisError):
        check_hypotheses(Kernel.neg_parabola(0.5), UNIT, "e")


def test_power_part_a_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        P = random_params(rng, "a")
        assert P.kappa >= 1
        assert check_widening_part(Kernel.power(0.5), P, "a", 1000).ok


def test_linear_kernel_part_c_not_strict():
    # |t| is affine on each side, so part c holds with equality away from the nodes
    rep = check_widening_part(Kernel.power(1.0), UNIT, "c", 200)
    assert not rep.strict_required and not rep.violations
    assert rep.midpoint_margin == pytest.approx(0.0, abs=1e-12)


_gaps = st.floats(0.01, 1.0)


@settings(max_examples=200, deadline=None)
@given(g=st.lists(_gaps, min_size=5, max_size=5), p=st.floats(0.1, 5), q=st.floats(0.1, 5),
       kern=st.sampled_from([Kernel.log(), Kernel.log_shifted(0.1), Kernel.power(0.5)]))
def test_part_e_matches_brute_force(g, p, q, kern):
    s = np.cumsum(g) / sum(g)
    alpha, a, b, beta = s[0] * 0.999, s[1], s[2], s[3]
    P = WideningParams(p, q, alpha, a, b, beta)
    rep = check_widening_part(kern, P, "e", 400)
    t = np.linspace(a, b, 401)
    lhs, rhs = brute_widening(kern.to_dict(), p, q, alpha, a, b, beta, t)
    assert rep.ok
    assert np.all(lhs - rhs >= -1e-10)

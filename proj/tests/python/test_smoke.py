import math

import numpy as np
import pytest

import nltlab


def test_specfun():
    assert nltlab.specfun.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert nltlab.specfun.beta(0.5, 1.5) == pytest.approx(math.pi / 2, rel=1e-14)
    assert nltlab.specfun.sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    with pytest.raises(ValueError):
        nltlab.specfun.gamma(-1.0)


def test_kernel():
    assert nltlab.taylor_coeff(2, 0.5, 1) == pytest.approx(3 * math.pi / 16, rel=1e-14)
    g = nltlab.GEvaluator(2, 0.25)
    lam = np.linspace(0.1, 0.9, 9)
    lhs = g.value(1.0 / lam)
    rhs = lam ** 2.5 * g.value(lam)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-8)
    assert np.all(g.first_derivative(lam) > 0)
    assert nltlab.check_recurrence(0.3, 3, 0.25) < 1e-8


def test_profiles_and_functionals():
    f = nltlab.RadialProfile.gaussian(1.0)
    assert f.value(np.array([0.0, 2.0]))[1] == pytest.approx(math.exp(-4.0))
    assert nltlab.functional_J(nltlab.RadialProfile.constant(1.0), 2) == 0.0
    R = nltlab.functional_R(f, 2, 0.5)
    assert nltlab.functional_R(f.scaled(2.0), 2, 0.5) == pytest.approx(4 * R, rel=1e-10)


def test_velocity_and_verification():
    f = nltlab.RadialProfile.gaussian(1.0)
    u = nltlab.radial_velocity(f, 2, 0.5, np.array([0.5, 1.0, 2.0]))
    assert u.shape == (3,)
    assert np.all(u < 0)
    assert nltlab.verify_prop32(f, 2, 0.5)["holds"]
    assert not nltlab.verify_prop32(f, 2, 0.5, constant_override=1000.0)["holds"]


def test_constants_and_riccati():
    b = nltlab.constant_bundle(2, 0.25)
    assert b.case == "sub"
    assert b.S0 is not None
    assert nltlab.constant_bundle(2, 0.75).S0 is None
    c = nltlab.RiccatiCoeffs(1.0, 1.0)
    assert nltlab.blowup_time(c, 2.0) == pytest.approx(math.log(3) / 2, rel=1e-14)
    t = np.array([0.0, 0.2, 0.4])
    np.testing.assert_allclose(nltlab.comparison_solution(c, 2.0, t), (3 + np.exp(2 * t)) / (3 - np.exp(2 * t)), rtol=1e-13)


def test_simulation():
    f = nltlab.RadialProfile.gaussian(1.0)
    res = nltlab.simulate(f, 2, 0.5, r_max=8.0, n_cells=128, t_end=0.1, threads=1)
    assert res["verdict"] == "completed"
    assert res["range_violation"] <= 1e-12
    assert res["J"][-1] > res["J"][0]
    b = nltlab.constant_bundle(2, 0.5)
    d = nltlab.qualifying_bump_delta(b)
    assert nltlab.verify_initial_condition(nltlab.RadialProfile.bump(d), b)["qualifies"]

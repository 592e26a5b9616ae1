import math

import pytest

import tfe10


def test_kernel():
    assert abs(tfe10.kernel_mass(1) - 1.0) < 1e-8
    d = tfe10.kernel_derivatives_1d(0.0)
    assert len(d) == 11
    assert d[0] == pytest.approx(math.gamma(1.1) / math.pi, rel=1e-12)
    assert tfe10.decay_constant_formula() == pytest.approx(0.121, rel=1e-3)
    assert tfe10.eigenvalue_linear(3) == pytest.approx(-0.3)


def test_exponents():
    assert tfe10.alpha0(1.0) == pytest.approx((1 / 11, 1 / 11))
    e = tfe10.exponents_unstable(0.0, 2.0)
    assert e["alpha"] == pytest.approx(0.8)
    assert e["beta"] == pytest.approx(0.1)
    assert tfe10.p_critical(1.0, 2) == pytest.approx(6.0)
    assert tfe10.unstable_symbol(1.0) == pytest.approx(0.0)


def test_branch_counts():
    r = tfe10.quadratic_branch_count(1.0, -1.0, 0.2)
    assert r["count"] == 2
    assert tfe10.classify_conic((1, 1, 0, 0, 0, -1))["type"] == "circle"
    c = tfe10.conic_branch_count((1, 1, 0, 0, 0, -1), (1, 1, -2, 0, 0, 0))
    assert c["count"] == 2


def test_linear_profile():
    f = tfe10.solve_fk_linear(1, points=601)
    assert len(f["y"]) == len(f["f"]) == 601
    assert abs(f["f"][0]) < 1e-12


def test_errors_and_cli():
    with pytest.raises(tfe10.TfeError):
        tfe10.eigenvalue_linear(-1)
    assert tfe10.cli("kernel", "--points", "10") == 2
    assert tfe10.cli("nosuch") == 2


def test_criterion():
    c = tfe10.run_criterion(10)
    assert c["passed"], c["detail"]

import math

import pytest

import cohom1

P1 = [1 / 7, 1 / 7, 1 / 7, 1, 1 / 49, 1 / 49, 1 / 49, 0]


def test_scalars_at_p1():
    d = cohom1.derived_scalars(P1, m=1)
    assert d["G"] == pytest.approx(1 / 7, rel=1e-14)
    assert d["Rs"] == pytest.approx(6 / 7, rel=1e-14)
    assert abs(d["Q"]) < 1e-15
    assert max(abs(v) for v in cohom1.vector_field(P1, m=1)) < 1e-15


def test_residual_and_qflow():
    assert cohom1.constraint_residual([0, 0, 0, 0, 1, 1, 0.5, 0]) == pytest.approx(-0.75)
    p = [0.3, 0.2, 0.1, 0.4, 0.25, 0.04, 0.1, 0.5]
    assert abs(cohom1.q_flow_consistency(p, m=2, epsilon=1)) < 1e-12


def test_seed_example():
    u = math.exp(-16)
    s = cohom1.seed(m=1, k=1, theta=cohom1.parse_angle("pi/2"), s4=0.5, eta0=-8)
    want = [1 - 30.5 * u, 5 * u, 5 * u, 2 * u, 2 * u, 0.5 * u, u, 0]
    assert all(abs(a - b) < 1e-10 * u for a, b in zip(s, want))


def test_shoot_alc():
    r = cohom1.shoot(m=1, k=1, theta=math.pi / 2, samples=True)
    assert r["label"] == "ALC"
    assert r["limit_point"] == "q2"
    assert r["nu2"] == pytest.approx(0.5, abs=1e-3)
    assert len(r["eta"]) == len(r["points"]) > 10


def test_catalog_and_audit():
    cat = cohom1.critical_points(m=1)
    assert cat["ok"]
    audit = cohom1.boundary_sign_audit(m=1, n=500, seed=3)
    assert audit["ok"]


def test_alpha_positive():
    r = cohom1.find_alpha(m=1, k=5, theta=0.05, lo=0, hi=200, tol=1e-3, jobs=2)
    assert r["lo"] > 1e-3


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        cohom1.parse_angle("nonsense")
    with pytest.raises(cohom1.BracketError):
        cohom1.find_alpha(m=1, k=5, theta=0.05, lo=0, hi=5)
    with pytest.raises(ValueError):
        cohom1.shoot(m=1, k=0, theta=0)

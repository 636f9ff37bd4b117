import math

import pytest

ss = pytest.importorskip("swarmshape")


def test_square_triangle_covariance():
    m = ss.square_moments(5 * math.pi / 4, 0.18)
    assert m.cov_xy == pytest.approx(-0.01, abs=1e-12)
    assert m.corr == pytest.approx(-0.5, abs=1e-12)
    assert len(ss.square_region(5 * math.pi / 4, 0.18)) == 3


def test_polygon_and_points():
    m = ss.polygon_moments([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert (m.mean_x, m.var_x, m.cov_xy) == pytest.approx((0.5, 1 / 12, 0.0))
    p = ss.point_moments([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert p.var_x == pytest.approx(0.25)


def test_circle_full_disc():
    m = ss.circle_moments(0.3, 2.0)
    assert m.var_x == pytest.approx(0.25)
    assert m.var_y == pytest.approx(0.25)


def test_friction():
    assert ss.forward_force(1.0, math.pi / 4, math.sqrt(2)) == 0.0
    assert ss.forward_force(1.0, math.pi / 2, 5.0) == pytest.approx(1.0)
    assert ss.boundary_layer_velocity(2.0, 1.0, 0.5) == pytest.approx(1.5)
    with pytest.raises(ss.DomainError):
        ss.forward_force(-1.0, 0.0, 0.1)


def test_two_robots_reach_goals():
    r = ss.arrange_two_robots((0.1, 0.2), (0.8, 0.7), (0.6, 0.1), (0.3, 0.9))
    assert r["final"][0] == pytest.approx((0.6, 0.1), abs=1e-9)
    assert r["final"][1] == pytest.approx((0.3, 0.9), abs=1e-9)
    assert r["rounds_x"] <= 2 and r["rounds_y"] <= 2


def test_n_robots_reach_goals():
    r = ss.arrange_n_robots("random", 8, 2, 3)
    assert r["final"] == r["goals"]
    assert r["distance"] > 0


def test_scenario_roundtrip():
    params = ss.parse_config("A = 0.5\nbeta_samples = 4\n")
    out = ss.run_scenario("square-sweep", params, 0)
    assert list(out["files"]) == ["square_sweep.csv"]
    assert out["files"]["square_sweep.csv"].startswith("A,beta,")
    again = ss.run_scenario("square-sweep", params, 0)
    assert ss.checksum(out["files"]["square_sweep.csv"]) == ss.checksum(again["files"]["square_sweep.csv"])
    with pytest.raises(ss.ValidationError):
        ss.run_scenario("square-sweep", {"bogus": "1"})
    with pytest.raises(ss.ConfigError):
        ss.parse_config("no equals sign")

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "swarmshape/errors.hpp"
#include "swarmshape/friction.hpp"
#include "swarmshape/physics.hpp"

using namespace swarmshape;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

DiscSwarm single(Vec2 p, double mu_unused = 0.0) {
    (void)mu_unused;
    DiscSwarm s;
    s.radius = 1.0;
    s.workspace = Workspace{100, 100, 1.0, FrictionParams{0.0}};
    s.positions = {p};
    return s;
}

}  // namespace

TEST_SUITE("physics") {

TEST_CASE("no force, no overlap: state unchanged") {
    const DiscSwarm s = hex_swarm(30, 1.0, 60, 60, 3);
    const DiscSwarm t = step(s, {0.0, 0.3, 0.0}, SimParams{});
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(t.positions[i] == s.positions[i]);
}

TEST_CASE("free disc moves dt * mobility * F, exactly along a line") {
    SimParams p;
    p.mobility = 0.5;
    DiscSwarm s = single({50, 50});
    s = step(s, {4.0, 0.0, 0.0}, p);
    CHECK(s.positions[0].x == Approx(50 + p.dt * 0.5 * 4.0).epsilon(1e-15));
    CHECK(s.positions[0].y == 50.0);
    const double th = 0.7;
    DiscSwarm r = run(single({20, 20}), {3.0, th, 2.0}, p);
    CHECK(r.positions[0].x == Approx(20 + 2.0 * 0.5 * 3.0 * std::cos(th)).epsilon(1e-12));
    CHECK(r.positions[0].y == Approx(20 + 2.0 * 0.5 * 3.0 * std::sin(th)).epsilon(1e-12));
}

TEST_CASE("wall friction slows a disc pushed at pi/4 into the floor") {
    SimParams p;
    p.mu_f = 0.5;
    const DiscSwarm on_floor = single({50, 1.0});
    const DiscSwarm free = single({50, 50});
    const ControlInput u{2.0, -kPi / 4, 0.0};
    const double dx_wall = step(on_floor, u, p).positions[0].x - 50;
    const double dx_free = step(free, u, p).positions[0].x - 50;
    CHECK(dx_wall < dx_free);
    CHECK(dx_wall == Approx(p.dt * forward_force(2.0, kPi / 4, {0.5})).epsilon(1e-12));
    CHECK(step(on_floor, u, p).positions[0].y == 1.0);
    // At the sweep's top level friction saturates at pi/4: the disc holds.
    p.mu_f = mu_for_friction_fraction(1.0);
    CHECK(step(on_floor, u, p).positions[0].x == 50.0);
}

TEST_CASE("contacts never change the mean in free space") {
    // Two overlapping discs pushed sideways: they separate, the mean drifts
    // exactly with the drive.
    DiscSwarm s = single({40, 50});
    s.positions.push_back({41.2, 50.3});
    SimParams p;
    const ControlInput u{6.0, 0.4, 0.0};
    const Vec2 m0 = (s.positions[0] + s.positions[1]) * 0.5;
    for (int k = 0; k < 100; ++k) s = step(s, u, p);
    const Vec2 m1 = (s.positions[0] + s.positions[1]) * 0.5;
    CHECK(m1.x - m0.x == Approx(100 * p.dt * 6.0 * std::cos(0.4)).epsilon(1e-9));
    CHECK(m1.y - m0.y == Approx(100 * p.dt * 6.0 * std::sin(0.4)).epsilon(1e-9));
    CHECK(max_overlap(s) < 1e-6);
}

TEST_CASE("frictionless swarm mean moves at mobility * F in free space") {
    const DiscSwarm s0 = hex_swarm(144, 4.0, 480, 480, 1);
    SimParams p;
    const ControlInput u{40.0, 2.0, 1.0};
    const Moments a = swarm_stats(s0), b = swarm_stats(run(s0, u, p));
    CHECK(std::abs((b.mean_x - a.mean_x) - 40.0 * std::cos(2.0)) < 1e-6);
    CHECK(std::abs((b.mean_y - a.mean_y) - 40.0 * std::sin(2.0)) < 1e-6);
}

TEST_CASE("settled pile: containment and overlap below 5% of the radius") {
    const DiscSwarm s0 = hex_swarm(144, 4.0, 240, 240, 2);
    SimParams p;
    p.mu_f = 1.0;
    const DiscSwarm s = run(s0, {40.0, -kPi / 2, 6.0}, p);
    CHECK(max_overlap(s) <= 0.05 * s.radius);
    for (const Vec2& q : s.positions) {
        CHECK(q.x >= s.workspace.min_x());
        CHECK(q.x <= s.workspace.max_x());
        CHECK(q.y >= s.workspace.min_y());
        CHECK(q.y <= s.workspace.max_y());
    }
}

TEST_CASE("deterministic for identical inputs") {
    const DiscSwarm s0 = hex_swarm(60, 2.0, 100, 100, 9);
    SimParams p;
    p.mu_f = 0.7;
    const DiscSwarm a = run(s0, {20.0, -2.0, 1.0}, p), b = run(s0, {20.0, -2.0, 1.0}, p);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.positions[i] == b.positions[i]);
}

TEST_CASE("hex block moments approximate its bounding region") {
    const DiscSwarm s = hex_swarm(144, 1.0, 100, 100, 0, 0.0, 0.0);
    const Moments m = swarm_stats(s);
    double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
    for (const Vec2& q : s.positions) {
        x0 = std::min(x0, q.x);
        x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y);
        y1 = std::max(y1, q.y);
    }
    // Each centre stands for one lattice cell: widen the box by half a cell.
    const double hx = 1.0, hy = std::sqrt(3.0) / 2;
    const BoundingBox box{x0 - hx, y0 - hy, x1 + hx, y1 + hy};
    const Moments mc = monte_carlo_moments([](Vec2) { return true; }, box, 100000, 4);
    CHECK(m.mean_x == Approx(mc.mean_x).epsilon(0.01));
    CHECK(m.var_x == Approx(mc.var_x).epsilon(0.1));
    CHECK(m.var_y == Approx(mc.var_y).epsilon(0.1));
    CHECK(std::abs(m.corr) < 0.1);
}

TEST_CASE("stats edge cases and parameter errors") {
    DiscSwarm s = single({10, 10});
    CHECK_THROWS_AS(swarm_stats(s), StatsError);
    s.positions = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    CHECK(swarm_stats(s).var_x == Approx(0.25));
    CHECK(swarm_stats(s).cov_xy == Approx(0.0));
    s.positions = {{5, 5}, {5, 5}};
    CHECK(swarm_stats(s).degenerate);
    SimParams bad;
    bad.dt = 0;
    CHECK_THROWS_AS(step(single({5, 5}), {}, bad), ParamError);
    bad = SimParams{};
    bad.mu_f = -1;
    CHECK_THROWS_AS(step(single({5, 5}), {}, bad), ParamError);
    bad = SimParams{};
    bad.mobility = 0;
    CHECK_THROWS_AS(step(single({5, 5}), {}, bad), ParamError);
    CHECK_THROWS_AS(step(single({5, 5}), {-1.0, 0.0, 0.0}, SimParams{}), ParamError);
    CHECK_THROWS_AS(hex_swarm(500, 1.0, 10, 10, 0), ParamError);
}

TEST_CASE("open loop sweep shares the initial state and writes CSV") {
    const DiscSwarm s0 = hex_swarm(40, 2.0, 160, 80, 5);
    const std::vector<ControlInput> prog{{20.0, -kPi / 2, 1.0}, {20.0, -kPi / 4, 1.0}};
    const auto tr = run_open_loop(s0, prog, SimParams{}, {0.0, 1.4}, 24, 120);
    REQUIRE(tr.size() == 2);
    CHECK(tr[0].stats[0].cov_xy == tr[1].stats[0].cov_xy);
    CHECK(tr[0].t.size() == 21);
    CHECK(tr[0].frames.size() == 5);
    std::ostringstream a, b;
    write_stats_csv(a, tr[0]);
    write_trajectory_csv(b, tr[0].frames);
    CHECK(a.str().rfind("t,mean_x,mean_y,var_x,var_y,cov_xy,corr\n", 0) == 0);
    CHECK(b.str().rfind("t,robot_id,x,y\n", 0) == 0);
    CHECK(mu_for_friction_fraction(1.0) == Approx(std::sqrt(2.0)));
}

}

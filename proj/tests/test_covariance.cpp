#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "swarmshape/covariance_control.hpp"
#include "swarmshape/errors.hpp"

using namespace swarmshape;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Moments stats(double mx, double my, double vx, double vy, double cov) {
    Moments m;
    m.mean_x = mx;
    m.mean_y = my;
    m.var_x = vx;
    m.var_y = vy;
    m.cov_xy = cov;
    return m;
}

ControllerConfig config() {
    ControllerConfig c;
    c.center = {120, 120};
    return c;
}

}  // namespace

TEST_SUITE("covariance_control") {

TEST_CASE("goal validation") {
    CHECK_NOTHROW(CovarianceGoal(100, 100, 99));
    CHECK_THROWS_AS(CovarianceGoal(100, 100, 101), GoalError);
    CHECK_THROWS_AS(CovarianceGoal(0, 100, 0), GoalError);
    CHECK_THROWS_AS(CovarianceGoal(100, 100, 0, 1.0), GoalError);
    CHECK_THROWS_AS(CovarianceGoal(100, 100, 0, 0.0), GoalError);
}

TEST_CASE("already satisfied goals pass straight to done") {
    const CovarianceGoal g(6000, 600, 300);
    const Moments m = stats(120, 120, 100, 500, 350);
    const ControllerStep s = controller_step(m, g, {}, config());
    CHECK(s.state.phase == Phase::done);
    CHECK(s.exited.size() == 5);
    CHECK(s.input.force == 0.0);
}

TEST_CASE("phase order and forces") {
    const CovarianceGoal g(6000, 600, 300);
    const ControllerConfig c = config();
    ControllerStep s = controller_step(stats(60, 120, 2000, 500, 0), g, {}, c);
    CHECK(s.state.phase == Phase::compress_x);
    CHECK(s.input.angle == Approx(kPi));
    // var_x small enough, off centre: centring toward +x.
    s = controller_step(stats(60, 120, 500, 900, 0), g, s.state, c);
    CHECK(s.state.phase == Phase::center_1);
    CHECK(s.input.angle == Approx(0.0));
    CHECK(s.input.force == Approx(c.force));
    // Centred: compress_y pushes down.
    s = controller_step(stats(120, 120, 500, 900, 0), g, s.state, c);
    CHECK(s.state.phase == Phase::compress_y);
    CHECK(s.input.angle == Approx(-kPi / 2));
    // Positive goal covariance: slide right, 45 degrees into the floor.
    s = controller_step(stats(120, 40, 800, 500, 0), g, s.state, c);
    CHECK(s.state.phase == Phase::shear);
    CHECK(s.state.shear_sign == 1);
    CHECK(s.input.angle == Approx(-kPi / 4));
    s = controller_step(stats(120, 40, 800, 500, 301), g, s.state, c);
    CHECK(s.state.phase == Phase::center_2);
}

TEST_CASE("negative goal covariance slides left") {
    const CovarianceGoal g(6000, 600, -300);
    ControllerState st{Phase::compress_y, 0, 0.0};
    const ControllerStep s = controller_step(stats(120, 40, 800, 500, 0), g, st, config());
    CHECK(s.state.phase == Phase::shear);
    CHECK(s.state.shear_sign == -1);
    CHECK(s.input.angle == Approx(-3 * kPi / 4));
}

TEST_CASE("closed loop: exits sound, centring tight, new epochs restart") {
    const DiscSwarm s0 = hex_swarm(144, 4.0, 240, 240, 4);
    SimParams p;
    p.mu_f = mu_for_friction_fraction(1.0);
    const ControllerConfig c = config();
    const std::vector<ScheduledGoal> sched{{0.0, CovarianceGoal(6000, 600, 300)},
                                           {30.0, CovarianceGoal(6000, 600, -300)}};
    ClosedLoopOptions o;
    o.end_time = 60.0;
    o.band_abs = 0.0;
    const ClosedLoopResult r = run_closed_loop(s0, sched, p, c, o);
    REQUIRE(r.epochs.size() == 2);
    for (const EpochReport& e : r.epochs) CHECK(e.reached);
    bool restarted = false;
    for (const PhaseEvent& e : r.events) {
        const CovarianceGoal& g = sched[e.epoch].goal;
        const int sign = g.cov() >= 0 ? 1 : -1;
        CHECK(exit_condition_holds(e.exited, e.stats, g, c, sign));
        if (e.exited == Phase::center_1 || e.exited == Phase::center_2) {
            CHECK(std::hypot(e.stats.mean_x - c.center.x, e.stats.mean_y - c.center.y) <= s0.radius);
        }
        if (e.epoch == 1 && e.exited == Phase::compress_x) restarted = true;
    }
    CHECK(restarted);

    // Shear monotonicity: over any 1 s window inside a shear phase, cov moves
    // toward the goal (5% of |goal| slack for contact noise).
    for (std::size_t k = 0; k + 1 < r.events.size(); ++k) {
        if (r.events[k].entered != Phase::shear) continue;
        const double t0 = r.events[k].t, t1 = r.events[k + 1].t;
        const double goal = sched[r.events[k].epoch].goal.cov();
        for (std::size_t i = 0; i < r.trace.t.size(); ++i) {
            for (std::size_t j = i + 1; j < r.trace.t.size(); ++j) {
                if (r.trace.t[i] < t0 || r.trace.t[j] > t1) continue;
                if (std::abs(r.trace.t[j] - r.trace.t[i] - 1.0) > 1e-9) continue;
                const double d = r.trace.stats[j].cov_xy - r.trace.stats[i].cov_xy;
                CHECK(d * (goal > 0 ? 1 : -1) >= -0.05 * std::abs(goal));
            }
        }
    }

    std::ostringstream os;
    write_phase_log_csv(os, r, sched);
    CHECK(os.str().rfind("t,exited,phase,var_x,var_y,cov_xy,mean_x,mean_y,goal_var_x,goal_var_y,goal_cov\n", 0) == 0);
}

TEST_CASE("without wall friction the shear barely moves the covariance") {
    // Same block built against the left wall, same 45-degree slide, with and
    // without friction. The workspace is wide enough that the slide stays clear
    // of the right wall.
    const DiscSwarm s0 = hex_swarm(144, 4.0, 480, 240, 6);
    auto shear_change = [&](double mu) {
        SimParams p;
        p.mu_f = mu;
        DiscSwarm s = run(s0, {40.0, -kPi / 2, 2.5}, p);
        s = run(s, {40.0, kPi, 3.0}, p);
        s = run(s, {40.0, -kPi / 2, 2.0}, p);
        const double before = swarm_stats(s).cov_xy;
        s = run(s, {40.0, -kPi / 4, 4.0}, p);
        return swarm_stats(s).cov_xy - before;
    };
    const double frictionless = shear_change(0.0), sticky = shear_change(mu_for_friction_fraction(1.0));
    CHECK(sticky > 60.0);
    CHECK(std::abs(frictionless) < 0.25 * std::abs(sticky));
}

TEST_CASE("schedule validation") {
    const DiscSwarm s0 = hex_swarm(10, 1.0, 50, 50, 0);
    ClosedLoopOptions o;
    o.end_time = 1.0;
    const CovarianceGoal g(10, 10, 1);
    CHECK_THROWS_AS(run_closed_loop(s0, {}, SimParams{}, config(), o), ParamError);
    CHECK_THROWS_AS(run_closed_loop(s0, {{0.5, g}}, SimParams{}, config(), o), ParamError);
    CHECK_THROWS_AS(run_closed_loop(s0, {{0.0, g}, {0.0, g}}, SimParams{}, config(), o), ParamError);
    CHECK_THROWS_AS(run_closed_loop(s0, {{0.0, g}, {2.0, g}}, SimParams{}, config(), o), ParamError);
}

}

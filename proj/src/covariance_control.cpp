#include "swarmshape/covariance_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "swarmshape/errors.hpp"

namespace swarmshape {

CovarianceGoal::CovarianceGoal(double var_x, double var_y, double cov, double c1)
    : var_x_(var_x), var_y_(var_y), cov_(cov), c1_(c1) {
    if (!(var_x > 0.0 && var_y > 0.0) || !std::isfinite(var_x) || !std::isfinite(var_y))
        throw GoalError("goal variances must be positive");
    if (!std::isfinite(cov) || std::abs(cov) > std::sqrt(var_x * var_y))
        throw GoalError("goal covariance exceeds sqrt(var_x var_y)");
    if (!(c1 > 0.0 && c1 < 1.0)) throw GoalError("c1 must lie in (0, 1)");
}

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::compress_x: return "compress_x";
        case Phase::center_1: return "center_1";
        case Phase::compress_y: return "compress_y";
        case Phase::shear: return "shear";
        case Phase::center_2: return "center_2";
        case Phase::done: return "done";
    }
    return "?";
}

namespace {

double center_distance(const Moments& m, const ControllerConfig& c) {
    return std::hypot(m.mean_x - c.center.x, m.mean_y - c.center.y);
}

ControlInput centering_input(const Moments& m, const ControllerConfig& c) {
    const double dx = c.center.x - m.mean_x, dy = c.center.y - m.mean_y;
    const double dist = std::hypot(dx, dy);
    return {c.force * std::min(1.0, dist / c.center_ramp), std::atan2(dy, dx), 0.0};
}

Phase next_phase(Phase p) { return p == Phase::done ? p : static_cast<Phase>(static_cast<int>(p) + 1); }

}  // namespace

bool exit_condition_holds(Phase exited, const Moments& m, const CovarianceGoal& g, const ControllerConfig& c,
                          int shear_sign) {
    switch (exited) {
        case Phase::compress_x: return m.var_x < g.c1() * g.var_x();
        case Phase::center_1:
        case Phase::center_2: return center_distance(m, c) <= c.center_tolerance;
        case Phase::compress_y: return m.var_y <= g.var_y();
        case Phase::shear: return shear_sign > 0 ? m.cov_xy >= g.cov() : m.cov_xy <= g.cov();
        case Phase::done: return false;
    }
    return false;
}

ControllerStep controller_step(const Moments& stats, const CovarianceGoal& goal, ControllerState state,
                               const ControllerConfig& config, double t) {
    if (!(config.force >= 0.0) || !(config.center_tolerance > 0.0) || !(config.center_ramp > 0.0))
        throw ParamError("controller force, tolerance and ramp must be positive");
    ControllerStep out;
    while (state.phase != Phase::done &&
           exit_condition_holds(state.phase, stats, goal, config, state.shear_sign)) {
        out.exited.push_back(state.phase);
        state.phase = next_phase(state.phase);
        state.phase_start = t;
        if (state.phase == Phase::shear) state.shear_sign = goal.cov() >= 0.0 ? 1 : -1;
    }
    const double pi = std::numbers::pi;
    switch (state.phase) {
        case Phase::compress_x: out.input = {config.force, pi, 0.0}; break;
        case Phase::compress_y: out.input = {config.force, -pi / 2, 0.0}; break;
        case Phase::shear:
            out.input = {config.force, state.shear_sign > 0 ? -pi / 4 : -3 * pi / 4, 0.0};
            break;
        case Phase::center_1:
        case Phase::center_2: out.input = centering_input(stats, config); break;
        case Phase::done: out.input = {0.0, 0.0, 0.0}; break;
    }
    out.state = state;
    return out;
}

ClosedLoopResult run_closed_loop(const DiscSwarm& initial, const std::vector<ScheduledGoal>& schedule,
                                 const SimParams& params, const ControllerConfig& config,
                                 const ClosedLoopOptions& options) {
    params.validate();
    if (schedule.empty() || schedule.front().start != 0.0) throw ParamError("goal schedule must start at t = 0");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i].start > schedule[i - 1].start)) throw ParamError("goal schedule times must increase");
    if (!(options.end_time > schedule.back().start)) throw ParamError("end time must follow the last goal");
    if (options.record_every < 1) throw ParamError("record_every must be >= 1");
    if (!(options.band_rel >= 0.0 && options.band_abs >= 0.0)) throw ParamError("goal band must be >= 0");

    ClosedLoopResult res;
    res.trace.mu_f = params.mu_f;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double end = i + 1 < schedule.size() ? schedule[i + 1].start : options.end_time;
        res.epochs.push_back({schedule[i].start, end, schedule[i].goal, false, 0.0, 0.0});
    }

    DiscSwarm swarm = initial;
    ControllerState state;
    std::size_t epoch = 0;
    const auto total = static_cast<long>(std::llround(options.end_time / params.dt));
    for (long k = 0;; ++k) {
        const double t = static_cast<double>(k) * params.dt;
        const Moments m = swarm_stats(swarm);
        if (k % options.record_every == 0 || k == total) {
            res.trace.t.push_back(t);
            res.trace.stats.push_back(m);
        }
        EpochReport& rep = res.epochs[epoch];
        const double band = std::max(options.band_rel * std::abs(rep.goal.cov()), options.band_abs);
        if (!rep.reached && std::abs(m.cov_xy - rep.goal.cov()) <= band) {
            rep.reached = true;
            rep.t_reached = t;
        }
        if (k == total) {
            rep.cov_at_end = m.cov_xy;
            break;
        }
        const ControllerStep cs = controller_step(m, rep.goal, state, config, t);
        for (Phase p : cs.exited) res.events.push_back({t, p, next_phase(p), m, epoch});
        state = cs.state;
        swarm = step(swarm, cs.input, params);

        // Epoch boundaries fall on the step whose end reaches them.
        const double t_next = static_cast<double>(k + 1) * params.dt;
        if (epoch + 1 < res.epochs.size() && t_next >= res.epochs[epoch + 1].start - 0.5 * params.dt) {
            rep.cov_at_end = swarm_stats(swarm).cov_xy;
            ++epoch;
            state = ControllerState{Phase::compress_x, 0, t_next};
        }
    }
    res.final_swarm = std::move(swarm);
    return res;
}

void write_phase_log_csv(std::ostream& os, const ClosedLoopResult& result,
                         const std::vector<ScheduledGoal>& schedule) {
    os << "t,exited,phase,var_x,var_y,cov_xy,mean_x,mean_y,goal_var_x,goal_var_y,goal_cov\n";
    for (const PhaseEvent& e : result.events) {
        const CovarianceGoal& g = schedule.at(e.epoch).goal;
        os << fmt::format("{:.6f},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", e.t,
                          phase_name(e.exited), phase_name(e.entered), e.stats.var_x, e.stats.var_y,
                          e.stats.cov_xy, e.stats.mean_x, e.stats.mean_y, g.var_x(), g.var_y(), g.cov());
    }
}

}  // namespace swarmshape

#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "swarmshape/physics.hpp"

namespace swarmshape {

/// Target second moments. Construction throws GoalError unless both
/// variances are positive, |cov| <= sqrt(var_x var_y) and c1 is in (0, 1).
class CovarianceGoal {
public:
    CovarianceGoal(double var_x, double var_y, double cov, double c1 = 0.1);

    double var_x() const { return var_x_; }
    double var_y() const { return var_y_; }
    double cov() const { return cov_; }
    double c1() const { return c1_; }

private:
    double var_x_, var_y_, cov_, c1_;
};

enum class Phase { compress_x, center_1, compress_y, shear, center_2, done };

std::string_view phase_name(Phase p);

struct ControllerState {
    Phase phase = Phase::compress_x;
    int shear_sign = 0;        // fixed when the shear phase is entered
    double phase_start = 0.0;  // time the current phase was entered
};

struct ControllerConfig {
    double force = 40.0;            // drive magnitude F
    Vec2 center{0.0, 0.0};          // workspace centre
    double center_tolerance = 2.0;  // centring exit radius
    double center_ramp = 20.0;      // centring force is F * min(1, dist / ramp)
};

struct ControllerStep {
    ControlInput input;
    ControllerState state;
    std::vector<Phase> exited;  // phases left during this call, in order
};

/// Advances through every phase whose exit inequality already holds, then
/// returns the force for the phase reached. Exits:
///   compress_x  var_x < c1 goal_var_x      (push into the left wall)
///   center_1    |mean - center| <= tol
///   compress_y  var_y <= goal_var_y        (push into the bottom wall)
///   shear       cov >= goal (sign +) or cov <= goal (sign -); the push is
///               at 45 degrees into the bottom wall, sliding right for +
///   center_2    |mean - center| <= tol
ControllerStep controller_step(const Moments& stats, const CovarianceGoal& goal, ControllerState state,
                               const ControllerConfig& config, double t = 0.0);

struct ScheduledGoal {
    double start = 0.0;
    CovarianceGoal goal;
};

struct PhaseEvent {
    double t = 0.0;
    Phase exited = Phase::compress_x;
    Phase entered = Phase::compress_x;
    Moments stats;
    std::size_t epoch = 0;
};

struct EpochReport {
    double start = 0.0;
    double end = 0.0;
    CovarianceGoal goal;
    bool reached = false;  // cov entered the goal band before `end`
    double t_reached = 0.0;
    double cov_at_end = 0.0;
};

struct ClosedLoopOptions {
    double end_time = 60.0;
    int record_every = 24;
    double band_rel = 0.1;   // goal band half-width: max(band_rel |goal|, band_abs)
    double band_abs = 50.0;
};

struct ClosedLoopResult {
    StatsTrace trace;
    std::vector<PhaseEvent> events;
    std::vector<EpochReport> epochs;
    DiscSwarm final_swarm;
};

/// Simulates the controller against a goal schedule (strictly increasing
/// start times, first at 0). Each new epoch restarts at compress_x.
ClosedLoopResult run_closed_loop(const DiscSwarm& initial, const std::vector<ScheduledGoal>& schedule,
                                 const SimParams& params, const ControllerConfig& config,
                                 const ClosedLoopOptions& options);

/// True when the exit inequality of `exited` holds for `stats`.
bool exit_condition_holds(Phase exited, const Moments& stats, const CovarianceGoal& goal,
                          const ControllerConfig& config, int shear_sign);

/// Columns t, exited, phase, var_x, var_y, cov_xy, mean_x, mean_y,
/// goal_var_x, goal_var_y, goal_cov.
void write_phase_log_csv(std::ostream& os, const ClosedLoopResult& result,
                         const std::vector<ScheduledGoal>& schedule);

}  // namespace swarmshape

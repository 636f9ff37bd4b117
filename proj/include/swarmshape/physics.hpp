#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "swarmshape/geometry.hpp"
#include "swarmshape/kinematic.hpp"

namespace swarmshape {

/// Discs of one radius inside `workspace` (robot_radius == radius).
struct DiscSwarm {
    std::vector<Vec2> positions;
    double radius = 1.0;
    Workspace workspace;

    std::size_t size() const { return positions.size(); }
};

struct SimParams {
    double dt = 1.0 / 240.0;
    double mobility = 1.0;     // velocity per unit force
    double mu_f = 0.0;         // wall friction coefficient
    double stiffness = 4000.0; // contact force per unit overlap
    std::uint64_t seed = 0;

    void validate() const;  // ParamError
};

/// Global force of magnitude `force` at `angle` (radians, world frame),
/// held for `duration` seconds.
struct ControlInput {
    double force = 0.0;
    double angle = 0.0;
    double duration = 0.0;

    Vec2 vector() const;
};

/// Hexagonal block of n discs centred in the workspace. Neighbours sit
/// `gap` radii beyond contact and each centre is jittered uniformly by up to
/// `jitter` radii per axis (gap > 2 sqrt2 jitter keeps discs apart).
DiscSwarm hex_swarm(int n, double radius, double width, double height, std::uint64_t seed,
                    double gap = 0.1, double jitter = 0.02);

/// One overdamped step. Velocity is mobility times (global force + penalty
/// contact forces); on a wall the force loses its normal part and its
/// tangential part is reduced per forward_force; a disc held by friction does
/// not slide. Contacts are integrated linearly implicitly, so any stiffness
/// is stable and a free disc or rigid translation is exact.
DiscSwarm step(const DiscSwarm& swarm, const ControlInput& u, const SimParams& params);

/// Advances for u.duration, rounded to whole steps.
DiscSwarm run(DiscSwarm swarm, const ControlInput& u, const SimParams& params);

/// Population moments of disc centres (divisor n). StatsError for n < 2.
Moments swarm_stats(const DiscSwarm& swarm);

/// Largest pairwise overlap 2r - d (0 if none).
double max_overlap(const DiscSwarm& swarm);

struct StatsTrace {
    double mu_f = 0.0;
    std::vector<double> t;
    std::vector<Moments> stats;
    std::vector<std::pair<double, DiscSwarm>> frames;  // empty unless requested

    double cov_excursion() const;  // max - min of cov_xy
};

/// Runs `program` once per friction level from the same initial swarm,
/// recording stats every `record_every` steps (and at t = 0) and, when
/// `frame_every` > 0, disc positions every `frame_every` steps.
std::vector<StatsTrace> run_open_loop(const DiscSwarm& initial, const std::vector<ControlInput>& program,
                                      const SimParams& params, const std::vector<double>& mu_sweep,
                                      int record_every = 24, int frame_every = 0);

/// Sweep level giving a maximum friction force of `fraction` * F at pi/4.
double mu_for_friction_fraction(double fraction);

void write_stats_csv(std::ostream& os, const StatsTrace& trace);
/// Columns t, robot_id, x, y for every frame.
void write_trajectory_csv(std::ostream& os, const std::vector<std::pair<double, DiscSwarm>>& frames);

}  // namespace swarmshape

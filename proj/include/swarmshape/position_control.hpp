#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarmshape/kinematic.hpp"

namespace swarmshape {

// ---------------------------------------------------------------------------
// Two robots, point model, L x L workspace with infinite-friction walls.
// ---------------------------------------------------------------------------

struct TwoRobotTask {
    Vec2 s1, s2;  // starts
    Vec2 e1, e2;  // goals
    double L = 1.0;
};

struct TwoRobotPlan {
    MoveSequence moves;
    RobotState final_state;
    int rounds_x = 0;  // largest number of pin rounds used by any x pass
    int rounds_y = 0;
    double clearance = 0.0;  // detach hop / wall margin used by the planner
};

Workspace two_robot_workspace(double L);

/// Validates a task and returns the clearance the planner will use.
double two_robot_clearance(const TwoRobotTask& task);

/// Brings r1x - r2x to e1x - e2x while keeping r1y - r2y fixed, starting from
/// (s1, s2). Each round pins the lower robot on the bottom wall and slides the
/// other one. Throws TaskError if the robots share a row and work is needed.
TwoRobotPlan x_spacing(const TwoRobotTask& task);

/// Requires the x spacing to be in place. Fixes the y spacing by pinning on
/// the left wall, then translates both robots onto their goals.
TwoRobotPlan y_spacing(const TwoRobotTask& task);

/// Full two-robot positioning; every emitted plan has been replayed.
TwoRobotPlan arrange_two_robots(const TwoRobotTask& task);

// ---------------------------------------------------------------------------
// DriftMove
// ---------------------------------------------------------------------------

struct DriftMoveSpec {
    double slip = 0.5;    // backward command after the hop
    double step = 1.0;    // forward travel of a wall-pinned robot per cycle
    double wiggle = 0.1;  // detach distance
    Wall wall = kTop;
    int direction = +1;   // +1: toward +x (top/bottom) or +y (left/right)
    int cycles = 1;
};

/// Triangular cycle {(step/2, -wiggle), (step/2, +wiggle), (-slip, 0)} in the
/// frame of `wall`, repeated `cycles` times. A robot pinned on the wall nets
/// `step`, a free robot `step - slip`.
MoveSequence drift_move(const DriftMoveSpec& spec);

// ---------------------------------------------------------------------------
// n robots on a grid of unit blocks.
// ---------------------------------------------------------------------------

struct Cell {
    int x = 0;
    int y = 0;
    constexpr bool operator==(const Cell&) const = default;
};

struct GridRect {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive
    bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
};

/// Discrete workspace: robots are unit blocks on cells [0,width) x [0,height).
/// A block touching a wall cannot move along or into it; a block whose
/// target cell holds a block that does not move is blocked (chains
/// propagate). Blocks never pin each other.
struct GridWorld {
    int width = 0;
    int height = 0;
};

using GridState = std::vector<Cell>;

/// One unit step in direction (dx, dy), |dx| + |dy| == 1.
GridState grid_step(const GridWorld& world, const GridState& state, Cell dir);

/// Applies axis-aligned integer commands as repeated unit steps.
GridState grid_replay(const GridWorld& world, GridState state, const MoveSequence& seq);

/// Staging and build zones. Robot k (0-based) is the k-th one processed:
/// starts go bottom-to-top, one per row; goals go right-to-left by column and
/// top-to-bottom within a column.
struct Zones {
    GridWorld world;
    GridRect build;
    GridRect staging;
    int clearance = 2;
    std::vector<Cell> starts;
    std::vector<Cell> goals;
};

/// Throws ZoneError with the violated constraint.
void validate_zones(const Zones& zones);

/// Smallest workspace holding both zones with the required clearances.
GridWorld minimum_world(int build_w, int build_h, int staging_w, int staging_h, int clearance);

/// Square cycle of the grid drift: {-slip t, +wiggle n, +step t, -wiggle n}
/// with t the drift direction along `wall` and n pointing away from it.
/// `return_to_wall` = false drops the final move.
MoveSequence grid_drift_cycle(Wall wall, int direction, int step, int slip, int wiggle, bool return_to_wall = true);

/// Goal-shape cells relative to the build zone's lower-left corner.
/// "grid": a ceil(sqrt n)-wide block filled from the top row down.
/// "random": n distinct cells of a ceil(sqrt 2n) square, drawn with `seed`.
std::vector<Cell> shape_cells(const std::string& name, int n, std::uint64_t seed);

/// Build zone flush with the right wall under `clearance` free rows; staging
/// is one column of n robots against the right wall, `clearance` rows above
/// the floor. `layout_clearance` (>= clearance, 0 = same) sizes the
/// workspace, so plans for several clearances can share one workspace.
/// Goals are sorted into processing order.
Zones make_column_zones(const std::vector<Cell>& shape, int clearance, int layout_clearance = 0);

struct NRobotPlan {
    MoveSequence moves;
    GridState final_state;
    int loops = 0;
};

/// Places every robot on its goal one loop at a time. The plan is replayed in
/// the grid model after every loop and the loop invariant checked.
NRobotPlan arrange_n_robots(const Zones& zones);

}  // namespace swarmshape

#include "swarmshape/position_control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "swarmshape/errors.hpp"

namespace swarmshape {

namespace {

constexpr double kSpacingTol = 1e-12;
constexpr int kMaxRounds = 16;

double coord(Vec2 v, int axis) { return axis == 0 ? v.x : v.y; }
Vec2 along(int axis, double d) { return axis == 0 ? Vec2{d, 0.0} : Vec2{0.0, d}; }
double inf_norm(Vec2 v) { return std::max(std::abs(v.x), std::abs(v.y)); }

// Runs the planner against the kinematic simulator: every command is applied
// as soon as it is emitted, so the plan and the tracked state cannot diverge.
class TwoRobotSession {
public:
    TwoRobotSession(const TwoRobotTask& task, double eps)
        : ws_(two_robot_workspace(task.L)), state_(make_state(ws_, {task.s1, task.s2})), eps_(eps), L_(task.L) {}

    void emit(Vec2 d) {
        if (d.x == 0.0 && d.y == 0.0) return;
        plan_.moves.push(d);
        state_ = apply_move(ws_, state_, {d});
    }

    Vec2 pos(int i) const { return state_.positions[static_cast<std::size_t>(i)]; }
    double delta(int axis) const { return coord(pos(0), axis) - coord(pos(1), axis); }

    // One spacing pass along `axis`: pin the robot nearer the perpendicular
    // wall (bottom for x, left for y), slide the other, hop off, repeat.
    int pass(int axis, double target) {
        const int perp = 1 - axis;
        plan_.moves.annotate(std::string(axis == 0 ? "x" : "y") + "-spacing");
        int rounds = 0;
        while (std::abs(delta(axis) - target) > kSpacingTol * L_) {
            if (rounds == kMaxRounds) throw TaskError("spacing pass made no progress");
            const double dp = coord(pos(0), perp) - coord(pos(1), perp);
            if (std::abs(dp) < 0.5 * eps_) throw TaskError("robots share a row/column; cannot pin one of them");
            const int pinned = dp < 0 ? 0 : 1;
            const int free = 1 - pinned;
            const double offset = coord(pos(free), axis) - coord(pos(pinned), axis);
            const double goal = free == 0 ? target : -target;

            // A single round can realise any offset that keeps both robots
            // eps away from the side walls.
            const double reach = L_ - 2.0 * eps_;
            const double next = goal > offset ? std::min(goal, std::min(0.0, offset) + reach)
                                               : std::max(goal, std::max(0.0, offset) - reach);
            const double lo = eps_ - std::min({0.0, offset, next});
            const double hi = L_ - eps_ - std::max({0.0, offset, next});
            if (lo > hi + 1e-15) throw TaskError("spacing round infeasible");
            const double px = std::clamp(coord(pos(pinned), axis), lo, hi);

            emit(along(axis, px - coord(pos(pinned), axis)));    // make room
            emit(along(perp, -coord(pos(pinned), perp)));        // pin onto the wall
            if (state_.contacts[static_cast<std::size_t>(pinned)].empty()) throw std::logic_error("pin failed");
            emit(along(axis, next - offset));                    // slide the free robot
            emit(along(perp, eps_));                             // detach
            ++rounds;
        }
        return rounds;
    }

    void translate_to(Vec2 e1) {
        plan_.moves.annotate("translate to goals");
        emit({e1.x - pos(0).x, 0.0});
        emit({0.0, e1.y - pos(0).y});
    }

    TwoRobotPlan finish(int rounds_x, int rounds_y) {
        plan_.final_state = state_;
        plan_.rounds_x = rounds_x;
        plan_.rounds_y = rounds_y;
        plan_.clearance = eps_;
        return std::move(plan_);
    }

private:
    Workspace ws_;
    RobotState state_;
    double eps_;
    double L_;
    TwoRobotPlan plan_;
};

void check_goals(const TwoRobotTask& task, const TwoRobotPlan& plan) {
    const Vec2 r1 = plan.final_state.positions[0], r2 = plan.final_state.positions[1];
    if ((r1 - task.e1).norm() > 1e-9 || (r2 - task.e2).norm() > 1e-9)
        throw std::logic_error("two-robot plan failed replay check");
}

}  // namespace

Workspace two_robot_workspace(double L) { return Workspace{L, L, 0.0, FrictionParams::infinite()}; }

double two_robot_clearance(const TwoRobotTask& task) {
    if (!(task.L > 0.0) || !std::isfinite(task.L)) throw TaskError("wall length must be positive");
    double wall = task.L;
    for (Vec2 p : {task.s1, task.s2, task.e1, task.e2}) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw TaskError("task points must be finite");
        wall = std::min({wall, p.x, task.L - p.x, p.y, task.L - p.y});
    }
    if (!(wall > 0.0)) throw TaskError("task points must lie strictly inside the workspace");
    const double sep = std::min(inf_norm(task.s1 - task.s2), inf_norm(task.e1 - task.e2));
    if (!(sep > 0.0)) throw TaskError("the two robots must have distinct starts and distinct goals");
    const double eps = std::min({1e-3 * task.L, 0.25 * wall, 0.25 * sep});
    if (eps < 1e-7 * task.L) throw TaskError("task points are too close to a wall or to each other");
    return eps;
}

TwoRobotPlan x_spacing(const TwoRobotTask& task) {
    const double eps = two_robot_clearance(task);
    TwoRobotSession session(task, eps);
    const double target = task.e1.x - task.e2.x;
    if (std::abs(session.delta(0) - target) > kSpacingTol * task.L && std::abs(session.delta(1)) < eps)
        throw TaskError("x spacing needs the robots at different heights");
    const int rounds = session.pass(0, target);
    return session.finish(rounds, 0);
}

TwoRobotPlan y_spacing(const TwoRobotTask& task) {
    const double eps = two_robot_clearance(task);
    if (std::abs((task.s1.x - task.s2.x) - (task.e1.x - task.e2.x)) > 1e-9)
        throw TaskError("y spacing requires the x spacing to be in place");
    TwoRobotSession session(task, eps);
    const double target = task.e1.y - task.e2.y;
    if (std::abs(session.delta(1) - target) > kSpacingTol * task.L && std::abs(session.delta(0)) < eps)
        throw TaskError("y spacing needs the robots in different columns");
    const int rounds = session.pass(1, target);
    session.translate_to(task.e1);
    TwoRobotPlan plan = session.finish(0, rounds);
    check_goals(task, plan);
    return plan;
}

TwoRobotPlan arrange_two_robots(const TwoRobotTask& task) {
    const double eps = two_robot_clearance(task);
    TwoRobotSession session(task, eps);
    const Vec2 ds = task.s1 - task.s2, de = task.e1 - task.e2;
    const bool need_x = std::abs(ds.x - de.x) > kSpacingTol * task.L;
    const bool need_y = std::abs(ds.y - de.y) > kSpacingTol * task.L;
    auto small = [eps](double v) { return std::abs(v) < eps; };

    // A pass along one axis needs the robots separated along the other.
    const bool x_then_y = (!need_x || !small(ds.y)) && (!need_y || !small(de.x));
    const bool y_then_x = (!need_y || !small(ds.x)) && (!need_x || !small(de.y));
    int rx = 0, ry = 0;
    if (x_then_y) {
        rx = session.pass(0, de.x);
        ry = session.pass(1, de.y);
    } else if (y_then_x) {
        ry = session.pass(1, de.y);
        rx = session.pass(0, de.x);
    } else if (small(ds.y) && small(de.y)) {
        // Same row at both ends: open a temporary vertical gap first.
        ry = session.pass(1, 0.25 * task.L);
        rx = session.pass(0, de.x);
        ry = std::max(ry, session.pass(1, de.y));
    } else {
        rx = session.pass(0, 0.25 * task.L);
        ry = session.pass(1, de.y);
        rx = std::max(rx, session.pass(0, de.x));
    }
    session.translate_to(task.e1);
    TwoRobotPlan plan = session.finish(rx, ry);
    check_goals(task, plan);
    return plan;
}

MoveSequence drift_move(const DriftMoveSpec& spec) {
    if (!(spec.slip > 0.0 && spec.slip <= spec.step)) throw DomainError("drift slip must lie in (0, step]");
    if (!(spec.wiggle > 0.0)) throw DomainError("drift wiggle must be positive");
    if (spec.direction != 1 && spec.direction != -1) throw DomainError("drift direction must be +1 or -1");
    if (spec.cycles < 0) throw DomainError("drift cycle count must be >= 0");
    Vec2 t, away;
    switch (spec.wall) {
        case kTop: t = {1, 0}; away = {0, -1}; break;
        case kBottom: t = {1, 0}; away = {0, 1}; break;
        case kLeft: t = {0, 1}; away = {1, 0}; break;
        case kRight: t = {0, 1}; away = {-1, 0}; break;
        default: throw DomainError("drift wall must be a single wall");
    }
    t = t * static_cast<double>(spec.direction);
    MoveSequence seq;
    for (int c = 0; c < spec.cycles; ++c) {
        seq.push(t * (0.5 * spec.step) + away * spec.wiggle);
        seq.push(t * (0.5 * spec.step) - away * spec.wiggle);
        seq.push(t * -spec.slip);
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Grid model
// ---------------------------------------------------------------------------

GridState grid_step(const GridWorld& world, const GridState& state, Cell dir) {
    if (std::abs(dir.x) + std::abs(dir.y) != 1) throw StateError("grid step must be a unit axis move");
    const int W = world.width, H = world.height;
    std::vector<int> occupant(static_cast<std::size_t>(W) * static_cast<std::size_t>(H), -1);
    auto idx = [W](Cell c) { return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(W) + static_cast<std::size_t>(c.x); };
    const std::size_t n = state.size();
    std::vector<char> stopped(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const Cell c = state[i];
        if (c.x < 0 || c.x >= W || c.y < 0 || c.y >= H) throw StateError("robot outside the grid");
        if (occupant[idx(c)] >= 0) throw StateError("two robots share a cell");
        occupant[idx(c)] = static_cast<int>(i);
        // Touching a wall pins the block unless it moves away from every wall it touches.
        bool pinned = false;
        if (c.x == 0 && dir.x <= 0) pinned = true;
        if (c.x == W - 1 && dir.x >= 0) pinned = true;
        if (c.y == 0 && dir.y <= 0) pinned = true;
        if (c.y == H - 1 && dir.y >= 0) pinned = true;
        stopped[i] = pinned;
    }
    // Resolve blocking front to back along the motion direction.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return state[i].x * dir.x + state[i].y * dir.y; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
    for (std::size_t i : order) {
        if (stopped[i]) continue;
        const Cell t{state[i].x + dir.x, state[i].y + dir.y};
        const int j = occupant[idx(t)];
        if (j >= 0 && stopped[static_cast<std::size_t>(j)]) stopped[i] = 1;
    }
    GridState out = state;
    for (std::size_t i = 0; i < n; ++i)
        if (!stopped[i]) out[i] = {state[i].x + dir.x, state[i].y + dir.y};
    return out;
}

namespace {

long to_cells(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) throw StateError("grid commands must be whole cells");
    return static_cast<long>(r);
}

GridState apply_grid_command(const GridWorld& world, GridState state, Vec2 d) {
    const long dx = to_cells(d.x), dy = to_cells(d.y);
    if (dx != 0 && dy != 0) throw StateError("grid commands must be axis-aligned");
    const Cell dir{dx > 0 ? 1 : (dx < 0 ? -1 : 0), dy > 0 ? 1 : (dy < 0 ? -1 : 0)};
    const long steps = std::abs(dx) + std::abs(dy);
    for (long s = 0; s < steps; ++s) state = grid_step(world, state, dir);
    return state;
}

}  // namespace

GridState grid_replay(const GridWorld& world, GridState state, const MoveSequence& seq) {
    for (const MoveCommand& c : seq.commands) state = apply_grid_command(world, std::move(state), c.displacement);
    return state;
}

GridWorld minimum_world(int build_w, int build_h, int staging_w, int staging_h, int clearance) {
    return {clearance + 1 + std::max(build_w, staging_w), 2 * clearance + build_h + staging_h};
}

void validate_zones(const Zones& z) {
    const GridWorld& w = z.world;
    auto fail = [](const std::string& why) { throw ZoneError(why); };
    if (w.width <= 0 || w.height <= 0) fail("workspace must be non-empty");
    if (z.clearance < 2) fail("clearance must be at least 2 cells");
    for (const GridRect* r : {&z.build, &z.staging}) {
        if (r->x0 > r->x1 || r->y0 > r->y1) fail("zone rectangles must be non-empty");
        if (r->x0 < 0 || r->y0 < 0 || r->x1 >= w.width || r->y1 >= w.height) fail("zones must lie inside the workspace");
    }
    if (z.build.y0 <= z.staging.y1) fail("build zone must lie strictly above the staging zone");
    if (z.build.x0 < z.clearance + 1 || z.staging.x0 < z.clearance + 1)
        fail("need clearance + one robot width left of both zones");
    if (z.build.y1 > w.height - 1 - z.clearance) fail("need clearance above the build zone");
    if (z.staging.y0 < z.clearance) fail("need clearance below the staging zone");
    const std::size_t n = z.starts.size();
    if (n == 0) fail("need at least one robot");
    if (z.goals.size() != n) fail("starts and goals differ in count");
    for (std::size_t k = 0; k < n; ++k) {
        if (!z.staging.contains(z.starts[k])) fail("start " + std::to_string(k) + " outside the staging zone");
        if (!z.build.contains(z.goals[k])) fail("goal " + std::to_string(k) + " outside the build zone");
        if (k > 0 && z.starts[k].y <= z.starts[k - 1].y)
            fail("starts must be ordered bottom-to-top with one robot per row");
        if (k > 0) {
            const Cell a = z.goals[k - 1], b = z.goals[k];
            if (b.x > a.x || (b.x == a.x && b.y >= a.y))
                fail("goals must be ordered right-to-left, top-to-bottom within a column");
        }
    }
    int min_start_x = w.width, max_goal_x = -1;
    for (std::size_t k = 0; k < n; ++k) {
        min_start_x = std::min(min_start_x, z.starts[k].x);
        max_goal_x = std::max(max_goal_x, z.goals[k].x);
    }
    if (min_start_x < max_goal_x) fail("staging robots must not lie left of any goal column");
}

MoveSequence grid_drift_cycle(Wall wall, int direction, int step, int slip, int wiggle, bool return_to_wall) {
    Vec2 t, away;
    switch (wall) {
        case kTop: t = {1, 0}; away = {0, -1}; break;
        case kBottom: t = {1, 0}; away = {0, 1}; break;
        case kLeft: t = {0, 1}; away = {1, 0}; break;
        case kRight: t = {0, 1}; away = {-1, 0}; break;
        default: throw DomainError("drift wall must be a single wall");
    }
    t = t * static_cast<double>(direction);
    MoveSequence seq;
    if (slip > 0) seq.push(t * -static_cast<double>(slip));  // pinned robot holds, others slip back
    seq.push(away * static_cast<double>(wiggle));
    if (step > 0) seq.push(t * static_cast<double>(step));
    if (return_to_wall) seq.push(away * -static_cast<double>(wiggle));
    return seq;
}

std::vector<Cell> shape_cells(const std::string& name, int n, std::uint64_t seed) {
    if (n < 1) throw DomainError("shape needs at least one cell");
    std::vector<Cell> cells;
    if (name == "grid") {
        const int w = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
        const int h = (n + w - 1) / w;
        for (int i = 0; i < n; ++i) cells.push_back({i % w, h - 1 - i / w});
    } else if (name == "random") {
        const int side = static_cast<int>(std::ceil(std::sqrt(2.0 * n)));
        std::vector<Cell> all;
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x) all.push_back({x, y});
        // Partial Fisher-Yates driven by the counter RNG.
        CounterRng rng(seed);
        for (int i = 0; i < n; ++i) {
            const auto span = static_cast<std::uint64_t>(all.size()) - static_cast<std::uint64_t>(i);
            const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.at(static_cast<std::uint64_t>(i)) % span);
            std::swap(all[static_cast<std::size_t>(i)], all[j]);
        }
        cells.assign(all.begin(), all.begin() + n);
    } else {
        throw DomainError("unknown shape '" + name + "'");
    }
    return cells;
}

Zones make_column_zones(const std::vector<Cell>& shape, int clearance, int layout_clearance) {
    if (shape.empty()) throw ZoneError("empty goal shape");
    const int lay = std::max(clearance, layout_clearance);
    int bw = 0, bh = 0;
    for (Cell c : shape) {
        if (c.x < 0 || c.y < 0) throw ZoneError("shape cells must be non-negative");
        bw = std::max(bw, c.x + 1);
        bh = std::max(bh, c.y + 1);
    }
    const int n = static_cast<int>(shape.size());
    Zones z;
    z.clearance = clearance;
    z.world = minimum_world(bw, bh, 1, n, lay);
    const int W = z.world.width, H = z.world.height;
    z.staging = {W - 1, lay, W - 1, lay + n - 1};
    z.build = {W - bw, H - lay - bh, W - 1, H - 1 - lay};
    for (int k = 0; k < n; ++k) z.starts.push_back({W - 1, lay + k});
    for (Cell c : shape) z.goals.push_back({z.build.x0 + c.x, z.build.y0 + c.y});
    std::sort(z.goals.begin(), z.goals.end(), [](Cell a, Cell b) { return a.x != b.x ? a.x > b.x : a.y > b.y; });
    if (std::adjacent_find(z.goals.begin(), z.goals.end()) != z.goals.end()) throw ZoneError("duplicate goal cells");
    return z;
}

NRobotPlan arrange_n_robots(const Zones& zones) {
    validate_zones(zones);
    const GridWorld& world = zones.world;
    const int eps = zones.clearance;
    const std::size_t n = zones.starts.size();

    NRobotPlan plan;
    GridState state = zones.starts;
    auto emit = [&](Vec2 d) {
        if (d.x == 0.0 && d.y == 0.0) return;
        plan.moves.push(d);
        state = apply_grid_command(world, std::move(state), d);
    };
    auto emit_all = [&](const MoveSequence& seq) {
        for (const MoveCommand& c : seq.commands) emit(c.displacement);
    };

    for (std::size_t k = 0; k < n; ++k) {
        const Cell start = state[k];
        const Cell goal = zones.goals[k];
        const int row = start.y;
        const std::string tag = "robot " + std::to_string(k + 1) + ": ";

        // 1. Leave the right wall, drop robot k onto the floor.
        plan.moves.annotate(tag + "move left and down");
        emit({-static_cast<double>(eps), 0.0});
        emit({0.0, -static_cast<double>(row)});

        // 2. Drift robot k left along the floor; the rest net zero. The last
        //    cycle stays lifted so robot k touches only the left wall.
        plan.moves.annotate(tag + "drift left along the floor");
        int remaining = state[k].x;
        const int max_slip = eps - 1;  // the swarm is eps cells off the right wall
        while (remaining > 0) {
            const int a = std::min(max_slip, remaining);
            remaining -= a;
            emit_all(grid_drift_cycle(kBottom, -1, a, a, 1, remaining > 0));
        }

        // 3. Drift robot k up the left wall to its goal row while the rest
        //    climb back to their original rows.
        plan.moves.annotate(tag + "drift up the left wall");
        int deficit = row - 1;        // how far the others still sit below home
        int rise = goal.y - state[k].y;
        int slip_left = goal.y - row; // total slip the others must absorb
        while (rise > 0) {
            const int b = std::min(eps, rise);
            int a = std::min({b, row - deficit, slip_left});
            a = std::max(a, b - deficit);
            emit_all(grid_drift_cycle(kLeft, +1, b, a, 1, true));
            rise -= b;
            slip_left -= a;
            deficit -= b - a;
        }
        if (deficit != 0 || slip_left != 0) throw std::logic_error("vertical drift bookkeeping failed");

        // 4. Push everything but robot k left, 5. carry everyone right.
        plan.moves.annotate(tag + "set relative x");
        emit({-static_cast<double>(goal.x - eps), 0.0});
        plan.moves.annotate(tag + "move right into place");
        emit({static_cast<double>(goal.x), 0.0});

        for (std::size_t j = 0; j < n; ++j) {
            const Cell expect = j <= k ? zones.goals[j] : zones.starts[j];
            if (!(state[j] == expect))
                throw std::logic_error("loop invariant violated after robot " + std::to_string(k + 1));
        }
        ++plan.loops;
    }
    plan.final_state = state;
    return plan;
}

}  // namespace swarmshape

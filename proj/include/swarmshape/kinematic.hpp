#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "swarmshape/friction.hpp"
#include "swarmshape/geometry.hpp"

namespace swarmshape {

enum Wall : std::uint8_t { kLeft = 1, kRight = 2, kBottom = 4, kTop = 8 };

/// Bit set of walls a robot is touching.
struct ContactSet {
    std::uint8_t bits = 0;

    bool empty() const { return bits == 0; }
    bool has(Wall w) const { return (bits & w) != 0; }
    int count() const { return __builtin_popcount(bits); }
    constexpr bool operator==(const ContactSet&) const = default;
};

inline constexpr double kContactTolerance = 1e-9;

/// Rectangular workspace [0,width] x [0,height] with walls of the given
/// friction. Robot centers live in the rectangle inset by robot_radius.
struct Workspace {
    double width = 1.0;
    double height = 1.0;
    double robot_radius = 0.0;
    FrictionParams wall_friction = FrictionParams::infinite();

    void validate() const;
    double min_x() const { return robot_radius; }
    double max_x() const { return width - robot_radius; }
    double min_y() const { return robot_radius; }
    double max_y() const { return height - robot_radius; }
};

struct MoveCommand {
    Vec2 displacement;
};

/// Ordered global commands plus optional phase annotations. An annotation
/// with index i is printed before command i.
struct MoveSequence {
    std::vector<MoveCommand> commands;
    std::vector<std::pair<std::size_t, std::string>> annotations;

    void push(Vec2 d) { commands.push_back({d}); }
    void annotate(std::string text) { annotations.emplace_back(commands.size(), std::move(text)); }
    void append(const MoveSequence& other);
    std::size_t size() const { return commands.size(); }
    bool empty() const { return commands.empty(); }
    double total_length() const;
};

/// Sum of command magnitudes.
double total_distance(const MoveSequence& seq);

/// Line-oriented plan format: `dx dy` per line in fixed-point decimal,
/// `#`-prefixed annotation lines, blank lines ignored.
void write_plan(std::ostream& os, const MoveSequence& seq);
MoveSequence read_plan(std::istream& is);

struct RobotState {
    std::vector<Vec2> positions;
    std::vector<ContactSet> contacts;
};

ContactSet contact_set(const Workspace& ws, Vec2 p);

/// Builds a state with contact flags derived from the positions. Throws
/// StateError if any center lies outside the inset rectangle.
RobotState make_state(const Workspace& ws, std::vector<Vec2> positions);

/// Infinite-friction kinematics: touching robots stay put unless the command
/// points away from every wall they touch; moving robots stop at the first
/// wall they reach. Robot-robot contact is ignored.
RobotState apply_move(const Workspace& ws, const RobotState& s, MoveCommand m);

/// Fold of apply_move; the result starts with `s` and has |seq| + 1 states.
std::vector<RobotState> apply_sequence(const Workspace& ws, const RobotState& s, const MoveSequence& seq);

/// Final state only.
RobotState replay(const Workspace& ws, const RobotState& s, const MoveSequence& seq);

}  // namespace swarmshape

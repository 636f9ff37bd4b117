#include "swarmshape/kinematic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "swarmshape/errors.hpp"

namespace swarmshape {

void Workspace::validate() const {
    if (!(width > 0.0 && height > 0.0)) throw StateError("workspace dimensions must be positive");
    if (!(robot_radius >= 0.0 && robot_radius < 0.5 * std::min(width, height)))
        throw StateError("robot radius must lie in [0, min(width, height)/2)");
}

void MoveSequence::append(const MoveSequence& other) {
    const std::size_t offset = commands.size();
    for (const auto& [i, text] : other.annotations) annotations.emplace_back(i + offset, text);
    commands.insert(commands.end(), other.commands.begin(), other.commands.end());
}

double MoveSequence::total_length() const {
    double total = 0.0;
    for (const MoveCommand& c : commands) total += c.displacement.norm();
    return total;
}

double total_distance(const MoveSequence& seq) { return seq.total_length(); }

void write_plan(std::ostream& os, const MoveSequence& seq) {
    std::size_t a = 0;
    char buf[96];
    for (std::size_t i = 0; i <= seq.commands.size(); ++i) {
        while (a < seq.annotations.size() && seq.annotations[a].first == i) os << "# " << seq.annotations[a++].second << '\n';
        if (i == seq.commands.size()) break;
        const Vec2 d = seq.commands[i].displacement;
        std::snprintf(buf, sizeof buf, "%.15f %.15f\n", d.x + 0.0, d.y + 0.0);
        os << buf;
    }
}

MoveSequence read_plan(std::istream& is) {
    MoveSequence seq;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::string text = line.substr(first + 1);
            if (!text.empty() && text.front() == ' ') text.erase(0, 1);
            seq.annotate(text);
            continue;
        }
        std::istringstream ls(line);
        Vec2 d;
        std::string rest;
        if (!(ls >> d.x >> d.y) || (ls >> rest) || !std::isfinite(d.x) || !std::isfinite(d.y))
            throw ConfigError("malformed plan line " + std::to_string(lineno));
        seq.push(d);
    }
    return seq;
}

ContactSet contact_set(const Workspace& ws, Vec2 p) {
    ContactSet c;
    if (p.x - ws.min_x() <= kContactTolerance) c.bits |= kLeft;
    if (ws.max_x() - p.x <= kContactTolerance) c.bits |= kRight;
    if (p.y - ws.min_y() <= kContactTolerance) c.bits |= kBottom;
    if (ws.max_y() - p.y <= kContactTolerance) c.bits |= kTop;
    return c;
}

RobotState make_state(const Workspace& ws, std::vector<Vec2> positions) {
    ws.validate();
    RobotState s;
    s.contacts.reserve(positions.size());
    for (const Vec2& p : positions) {
        if (!(p.x >= ws.min_x() - kContactTolerance && p.x <= ws.max_x() + kContactTolerance &&
              p.y >= ws.min_y() - kContactTolerance && p.y <= ws.max_y() + kContactTolerance))
            throw StateError("robot center outside the workspace");
        s.contacts.push_back(contact_set(ws, p));
    }
    s.positions = std::move(positions);
    return s;
}

namespace {

bool moves_away_from_all(ContactSet c, Vec2 d) {
    if (c.has(kLeft) && !(d.x > 0)) return false;
    if (c.has(kRight) && !(d.x < 0)) return false;
    if (c.has(kBottom) && !(d.y > 0)) return false;
    if (c.has(kTop) && !(d.y < 0)) return false;
    return true;
}

Vec2 move_one(const Workspace& ws, Vec2 p, ContactSet c, Vec2 d) {
    if (!c.empty() && !moves_away_from_all(c, d)) return p;
    // First wall hit along the segment; the robot stays there afterwards.
    double t = 1.0;
    int hit_axis = -1;
    double hit_value = 0.0;
    auto consider = [&](double pos, double delta, double lo, double hi, int axis) {
        if (delta > 0 && pos + delta > hi) {
            const double th = std::max(0.0, (hi - pos) / delta);
            if (th < t) { t = th; hit_axis = axis; hit_value = hi; }
        } else if (delta < 0 && pos + delta < lo) {
            const double th = std::max(0.0, (lo - pos) / delta);
            if (th < t) { t = th; hit_axis = axis; hit_value = lo; }
        }
    };
    consider(p.x, d.x, ws.min_x(), ws.max_x(), 0);
    consider(p.y, d.y, ws.min_y(), ws.max_y(), 1);
    if (hit_axis < 0) return p + d;
    Vec2 q = p + d * t;
    if (hit_axis == 0) q.x = hit_value; else q.y = hit_value;
    q.x = std::clamp(q.x, ws.min_x(), ws.max_x());
    q.y = std::clamp(q.y, ws.min_y(), ws.max_y());
    return q;
}

}  // namespace

RobotState apply_move(const Workspace& ws, const RobotState& s, MoveCommand m) {
    if (s.contacts.size() != s.positions.size()) throw StateError("contact flags do not match positions");
    if (!std::isfinite(m.displacement.x) || !std::isfinite(m.displacement.y))
        throw StateError("move command must be finite");
    RobotState out;
    out.positions.reserve(s.positions.size());
    out.contacts.reserve(s.positions.size());
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        const Vec2 p = s.positions[i];
        if (contact_set(ws, p) != s.contacts[i]) throw StateError("stale contact flags");
        const Vec2 q = move_one(ws, p, s.contacts[i], m.displacement);
        out.positions.push_back(q);
        out.contacts.push_back(contact_set(ws, q));
    }
    return out;
}

std::vector<RobotState> apply_sequence(const Workspace& ws, const RobotState& s, const MoveSequence& seq) {
    std::vector<RobotState> traj;
    traj.reserve(seq.size() + 1);
    traj.push_back(s);
    for (const MoveCommand& c : seq.commands) traj.push_back(apply_move(ws, traj.back(), c));
    return traj;
}

RobotState replay(const Workspace& ws, const RobotState& s, const MoveSequence& seq) {
    RobotState cur = s;
    for (const MoveCommand& c : seq.commands) cur = apply_move(ws, cur, c);
    return cur;
}

}  // namespace swarmshape

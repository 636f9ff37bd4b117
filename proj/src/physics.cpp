#include "swarmshape/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "swarmshape/errors.hpp"
#include "swarmshape/friction.hpp"

namespace swarmshape {

void SimParams::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParamError("dt must be positive");
    if (!(mobility > 0.0) || !std::isfinite(mobility)) throw ParamError("mobility must be positive");
    if (!(mu_f >= 0.0)) throw ParamError("mu_f must be >= 0");
    if (!(stiffness > 0.0) || !std::isfinite(stiffness)) throw ParamError("stiffness must be positive");
}

Vec2 ControlInput::vector() const { return {force * std::cos(angle), force * std::sin(angle)}; }

namespace {

void check_swarm(const DiscSwarm& s) {
    if (!(s.radius > 0.0)) throw ParamError("disc radius must be positive");
    if (s.workspace.robot_radius != s.radius) throw ParamError("workspace inset must equal the disc radius");
    s.workspace.validate();
}

void check_input(const ControlInput& u) {
    if (!(u.force >= 0.0) || !std::isfinite(u.force)) throw ParamError("control force must be finite and >= 0");
    if (!std::isfinite(u.angle)) throw ParamError("control angle must be finite");
    if (!(u.duration >= 0.0)) throw ParamError("control duration must be >= 0");
}

// Uniform grid with cells of one disc diameter; a disc can only touch discs
// in its own or the eight surrounding cells.
class NeighbourGrid {
public:
    NeighbourGrid(const DiscSwarm& s) : cell_(2.0 * s.radius) {
        nx_ = std::max(1, static_cast<int>(std::ceil(s.workspace.width / cell_)));
        ny_ = std::max(1, static_cast<int>(std::ceil(s.workspace.height / cell_)));
        start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
        cell_of_.resize(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            cell_of_[i] = index(s.positions[i]);
            ++start_[static_cast<std::size_t>(cell_of_[i]) + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
        items_.resize(s.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < s.size(); ++i) items_[fill[static_cast<std::size_t>(cell_of_[i])]++] = i;
    }

    template <class F>
    void for_each_pair(F&& f) const {
        for (std::size_t i = 0; i < cell_of_.size(); ++i) {
            const int cx = cell_of_[i] % nx_, cy = cell_of_[i] / nx_;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = cx + dx, y = cy + dy;
                    if (x < 0 || y < 0 || x >= nx_ || y >= ny_) continue;
                    const auto c = static_cast<std::size_t>(y * nx_ + x);
                    for (std::size_t k = start_[c]; k < start_[c + 1]; ++k)
                        if (items_[k] > i) f(i, items_[k]);
                }
            }
        }
    }

private:
    int index(Vec2 p) const {
        const int x = std::clamp(static_cast<int>(std::floor(p.x / cell_)), 0, nx_ - 1);
        const int y = std::clamp(static_cast<int>(std::floor(p.y / cell_)), 0, ny_ - 1);
        return y * nx_ + x;
    }

    double cell_;
    int nx_ = 1, ny_ = 1;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> items_;
    std::vector<int> cell_of_;
};

// Removes the into-wall part of f and applies Coulomb friction to the rest.
// `inward` is the unit normal pointing into the wall.
Vec2 wall_reaction(Vec2 f, Vec2 inward, const FrictionParams& fp) {
    const double fn = dot(f, inward);
    if (fn <= 0.0) return f;
    const Vec2 tangent{-inward.y, inward.x};
    const double ft = dot(f, tangent);
    const double theta = std::atan2(ft, fn);
    return tangent * forward_force(std::hypot(fn, ft), theta, fp);
}

}  // namespace

DiscSwarm hex_swarm(int n, double radius, double width, double height, std::uint64_t seed, double gap,
                    double jitter) {
    if (n < 1) throw ParamError("need at least one disc");
    if (!(radius > 0.0)) throw ParamError("disc radius must be positive");
    if (!(gap >= 0.0 && jitter >= 0.0)) throw ParamError("gap and jitter must be >= 0");
    DiscSwarm s;
    s.radius = radius;
    s.workspace = Workspace{width, height, radius, FrictionParams{0.0}};
    s.workspace.validate();
    const double d = (2.0 + gap) * radius;
    const double row_h = d * std::sqrt(3.0) / 2.0;
    const int cols = static_cast<int>(std::ceil(std::sqrt(n * std::sqrt(3.0) / 2.0)));
    const int rows = (n + cols - 1) / cols;
    const double block_w = (cols - 1) * d + (rows > 1 ? 0.5 * d : 0.0);
    const double block_h = (rows - 1) * row_h;
    if (block_w + 2.0 * radius * (1.0 + jitter) > width || block_h + 2.0 * radius * (1.0 + jitter) > height)
        throw ParamError("hexagonal block does not fit in the workspace");
    const double x0 = 0.5 * (width - block_w), y0 = 0.5 * (height - block_h);
    CounterRng rng(seed);
    for (int i = 0; i < n; ++i) {
        const int r = i / cols, c = i % cols;
        const auto k = static_cast<std::uint64_t>(i);
        const double jx = (2.0 * rng.uniform(2 * k) - 1.0) * jitter * radius;
        const double jy = (2.0 * rng.uniform(2 * k + 1) - 1.0) * jitter * radius;
        s.positions.push_back({x0 + c * d + (r % 2 ? 0.5 * d : 0.0) + jx, y0 + r * row_h + jy});
    }
    return s;
}

namespace {

struct Contact {
    std::size_t i, j;
    Vec2 n;  // unit normal from j to i
};

// Applies (I + h K) to the free DoFs of x, where K is the normal contact
// stiffness (k n n^T per contact) and fixed DoFs are held at zero.
void apply_system(const std::vector<Contact>& contacts, double hk, const std::vector<char>& fixed,
                  const std::vector<double>& x, std::vector<double>& y) {
    y = x;
    for (const Contact& c : contacts) {
        const double rel = (x[2 * c.i] - x[2 * c.j]) * c.n.x + (x[2 * c.i + 1] - x[2 * c.j + 1]) * c.n.y;
        const double s = hk * rel;
        y[2 * c.i] += s * c.n.x;
        y[2 * c.i + 1] += s * c.n.y;
        y[2 * c.j] -= s * c.n.x;
        y[2 * c.j + 1] -= s * c.n.y;
    }
    for (std::size_t d = 0; d < y.size(); ++d)
        if (fixed[d]) y[d] = 0.0;
}

double dot_free(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += a[d] * b[d];
    return s;
}

}  // namespace

DiscSwarm step(const DiscSwarm& swarm, const ControlInput& u, const SimParams& params) {
    params.validate();
    check_input(u);
    check_swarm(swarm);
    const std::size_t n = swarm.size();
    const Vec2 drive = u.vector();
    std::vector<Vec2> force(n, drive);
    std::vector<Contact> contacts;
    const double contact = 2.0 * swarm.radius;
    NeighbourGrid grid(swarm);
    grid.for_each_pair([&](std::size_t i, std::size_t j) {
        const Vec2 d = swarm.positions[i] - swarm.positions[j];
        const double dist = d.norm();
        if (dist >= contact) return;
        // Coincident centres push apart along x by convention.
        const Vec2 dir = dist > 0.0 ? d * (1.0 / dist) : Vec2{1.0, 0.0};
        const Vec2 f = dir * (params.stiffness * (contact - dist));
        force[i] = force[i] + f;
        force[j] = force[j] - f;
        contacts.push_back({i, j, dir});
    });

    // Wall contacts: a disc pressed into a wall keeps its normal coordinate;
    // if friction holds it, its tangential coordinate too. A sliding disc
    // carries the reduced tangential force.
    const Workspace& ws = swarm.workspace;
    const FrictionParams fp{params.mu_f};
    const double tol = kContactTolerance * std::max(ws.width, ws.height);
    const double h = params.dt * params.mobility;
    std::vector<char> fixed(2 * n, 0);
    std::vector<double> b(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = swarm.positions[i];
        Vec2 f = force[i];
        struct WallSide { bool touching; Vec2 inward; int normal_axis; };
        const WallSide sides[] = {{p.x <= ws.min_x() + tol, {-1, 0}, 0},
                                  {p.x >= ws.max_x() - tol, {1, 0}, 0},
                                  {p.y <= ws.min_y() + tol, {0, -1}, 1},
                                  {p.y >= ws.max_y() - tol, {0, 1}, 1}};
        for (const WallSide& w : sides) {
            if (!w.touching || dot(f, w.inward) <= 0.0) continue;
            const Vec2 g = wall_reaction(f, w.inward, fp);
            fixed[2 * i + static_cast<std::size_t>(w.normal_axis)] = 1;
            if (g.x == 0.0 && g.y == 0.0) fixed[2 * i + static_cast<std::size_t>(1 - w.normal_axis)] = 1;
            f = g;
        }
        b[2 * i] = fixed[2 * i] ? 0.0 : h * f.x;
        b[2 * i + 1] = fixed[2 * i + 1] ? 0.0 : h * f.y;
    }

    // Linearly implicit Euler: (I + h K) dx = h f, solved by conjugate
    // gradients. Starting from dx = h f keeps the mean displacement exact,
    // since every contact term sums to zero.
    std::vector<double> x = b, r(2 * n), Ap(2 * n);
    const double hk = h * params.stiffness;
    if (!contacts.empty()) {
        apply_system(contacts, hk, fixed, x, Ap);
        for (std::size_t d = 0; d < r.size(); ++d) r[d] = b[d] - Ap[d];
        std::vector<double> pdir = r;
        double rr = dot_free(r, r);
        const double stop = 1e-24 * std::max(dot_free(b, b), 1e-300);
        for (int it = 0; it < 500 && rr > stop; ++it) {
            apply_system(contacts, hk, fixed, pdir, Ap);
            const double alpha = rr / dot_free(pdir, Ap);
            for (std::size_t d = 0; d < x.size(); ++d) {
                x[d] += alpha * pdir[d];
                r[d] -= alpha * Ap[d];
            }
            const double rr_next = dot_free(r, r);
            const double beta = rr_next / rr;
            rr = rr_next;
            for (std::size_t d = 0; d < x.size(); ++d) pdir[d] = r[d] + beta * pdir[d];
        }
    }

    DiscSwarm out = swarm;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 q{swarm.positions[i].x + x[2 * i], swarm.positions[i].y + x[2 * i + 1]};
        out.positions[i] = {std::clamp(q.x, ws.min_x(), ws.max_x()), std::clamp(q.y, ws.min_y(), ws.max_y())};
    }
    return out;
}

DiscSwarm run(DiscSwarm swarm, const ControlInput& u, const SimParams& params) {
    params.validate();
    check_input(u);
    const auto steps = static_cast<long>(std::llround(u.duration / params.dt));
    for (long k = 0; k < steps; ++k) swarm = step(swarm, u, params);
    return swarm;
}

Moments swarm_stats(const DiscSwarm& swarm) {
    if (swarm.size() < 2) throw StatsError("swarm statistics need at least two discs");
    return point_moments(swarm.positions);
}

double max_overlap(const DiscSwarm& swarm) {
    double worst = 0.0;
    NeighbourGrid grid(swarm);
    grid.for_each_pair([&](std::size_t i, std::size_t j) {
        worst = std::max(worst, 2.0 * swarm.radius - (swarm.positions[i] - swarm.positions[j]).norm());
    });
    return worst;
}

double StatsTrace::cov_excursion() const {
    if (stats.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(stats.begin(), stats.end(),
                                        [](const Moments& a, const Moments& b) { return a.cov_xy < b.cov_xy; });
    return hi->cov_xy - lo->cov_xy;
}

std::vector<StatsTrace> run_open_loop(const DiscSwarm& initial, const std::vector<ControlInput>& program,
                                      const SimParams& params, const std::vector<double>& mu_sweep,
                                      int record_every, int frame_every) {
    if (record_every < 1) throw ParamError("record_every must be >= 1");
    if (frame_every < 0) throw ParamError("frame_every must be >= 0");
    for (const ControlInput& u : program) check_input(u);
    std::vector<StatsTrace> traces;
    for (double mu : mu_sweep) {
        SimParams p = params;
        p.mu_f = mu;
        p.validate();
        StatsTrace tr;
        tr.mu_f = mu;
        DiscSwarm s = initial;
        long k = 0;
        tr.t.push_back(0.0);
        tr.stats.push_back(swarm_stats(s));
        if (frame_every > 0) tr.frames.emplace_back(0.0, s);
        for (const ControlInput& u : program) {
            const auto steps = static_cast<long>(std::llround(u.duration / p.dt));
            for (long j = 0; j < steps; ++j) {
                s = step(s, u, p);
                if (++k % record_every == 0) {
                    tr.t.push_back(static_cast<double>(k) * p.dt);
                    tr.stats.push_back(swarm_stats(s));
                }
                if (frame_every > 0 && k % frame_every == 0) tr.frames.emplace_back(static_cast<double>(k) * p.dt, s);
            }
        }
        traces.push_back(std::move(tr));
    }
    return traces;
}

double mu_for_friction_fraction(double fraction) {
    if (!(fraction >= 0.0)) throw ParamError("friction fraction must be >= 0");
    return fraction * std::numbers::sqrt2;
}

void write_stats_csv(std::ostream& os, const StatsTrace& trace) {
    os << "t,mean_x,mean_y,var_x,var_y,cov_xy,corr\n";
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const Moments& m = trace.stats[i];
        os << fmt::format("{:.6f},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", trace.t[i], m.mean_x, m.mean_y,
                          m.var_x, m.var_y, m.cov_xy, m.corr);
    }
}

void write_trajectory_csv(std::ostream& os, const std::vector<std::pair<double, DiscSwarm>>& frames) {
    os << "t,robot_id,x,y\n";
    for (const auto& [t, s] : frames)
        for (std::size_t i = 0; i < s.size(); ++i)
            os << fmt::format("{:.6f},{},{:.9g},{:.9g}\n", t, i, s.positions[i].x, s.positions[i].y);
}

}  // namespace swarmshape

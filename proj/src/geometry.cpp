#include "swarmshape/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "swarmshape/errors.hpp"

namespace swarmshape {

namespace {

constexpr double kDuplicateVertex = 1e-12;
// Larger polygons (e.g. fine circle approximations) skip the O(n^2) check.
constexpr std::size_t kSimplicityCheckLimit = 2048;

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    if (std::abs(v) <= 1e-15) return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) - 1e-15 <= p.x && p.x <= std::max(a.x, b.x) + 1e-15 &&
           std::min(a.y, b.y) - 1e-15 <= p.y && p.y <= std::max(a.y, b.y) + 1e-15;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool is_simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // adjacent edges share a vertex
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Moments finish_moments(Moments m) {
    m.var_x = std::max(m.var_x, 0.0);
    m.var_y = std::max(m.var_y, 0.0);
    const double denom = std::sqrt(m.var_x * m.var_y);
    if (denom > 0.0) {
        m.corr = std::clamp(m.cov_xy / denom, -1.0, 1.0);
        m.degenerate = false;
    } else {
        m.corr = 0.0;
        m.degenerate = true;
    }
    return m;
}

double signed_area(std::span<const Vec2> v) {
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * twice;
}

Polygon::Polygon(std::vector<Vec2> vertices) {
    std::vector<Vec2> cleaned;
    cleaned.reserve(vertices.size());
    for (const Vec2& p : vertices) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DegenerateRegion("non-finite polygon vertex");
        if (cleaned.empty() || (p - cleaned.back()).norm() > kDuplicateVertex) cleaned.push_back(p);
    }
    while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= kDuplicateVertex) cleaned.pop_back();
    if (cleaned.size() < 3) throw DegenerateRegion("polygon needs at least 3 distinct vertices");
    if (signed_area(cleaned) < 0.0) std::reverse(cleaned.begin(), cleaned.end());
    if (cleaned.size() <= kSimplicityCheckLimit && !is_simple(cleaned))
        throw DegenerateRegion("polygon is self-intersecting");
    vertices_ = std::move(cleaned);
}

Polygon Polygon::translated(Vec2 d) const {
    std::vector<Vec2> out(vertices_.begin(), vertices_.end());
    for (Vec2& p : out) p += d;
    return Polygon(std::move(out));
}

Polygon Polygon::rotated(double angle, Vec2 about) const {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    for (const Vec2& p : vertices_) {
        const Vec2 q = p - about;
        out.push_back(Vec2{c * q.x - s * q.y, s * q.x + c * q.y} + about);
    }
    return Polygon(std::move(out));
}

Polygon Polygon::reversed() const {
    std::vector<Vec2> out(vertices_.rbegin(), vertices_.rend());
    return Polygon(std::move(out));
}

bool Polygon::contains(Vec2 p) const {
    bool inside = false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = vertices_[i], b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double polygon_area(const Polygon& p) {
    const double a = signed_area(p.vertices());
    if (!(a >= kDegenerateArea)) throw DegenerateRegion("polygon area below tolerance");
    return a;
}

Moments polygon_moments(const Polygon& p) {
    const double area = polygon_area(p);
    const auto v = p.vertices();
    const std::size_t n = v.size();

    // Centroid about the first vertex keeps the first pass well conditioned.
    const Vec2 origin = v[0];
    Vec2 c{};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i] - origin, b = v[(i + 1) % n] - origin;
        const double w = cross(a, b);
        c += (a + b) * w;
    }
    c = c * (1.0 / (6.0 * area));
    const Vec2 centroid = c + origin;

    // Second moments about the centroid.
    double ixx = 0.0, iyy = 0.0, ixy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i] - centroid, b = v[(i + 1) % n] - centroid;
        const double w = cross(a, b);
        ixx += w * (a.x * a.x + a.x * b.x + b.x * b.x);
        iyy += w * (a.y * a.y + a.y * b.y + b.y * b.y);
        ixy += w * (a.x * b.y + 2.0 * a.x * a.y + 2.0 * b.x * b.y + b.x * a.y);
    }
    Moments m;
    m.mean_x = centroid.x;
    m.mean_y = centroid.y;
    m.var_x = ixx / (12.0 * area);
    m.var_y = iyy / (12.0 * area);
    m.cov_xy = ixy / (24.0 * area);
    return finish_moments(m);
}

std::uint64_t CounterRng::at(std::uint64_t counter) const {
    return splitmix64(splitmix64(seed_) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform(std::uint64_t counter) const {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
}

Moments monte_carlo_moments(const std::function<bool(Vec2)>& inside, BoundingBox bbox,
                            std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 10000) throw DomainError("monte_carlo_moments needs at least 1e4 samples");
    if (!(bbox.max_x > bbox.min_x && bbox.max_y > bbox.min_y)) throw DomainError("empty bounding box");
    const CounterRng rng(seed);
    const double wx = bbox.max_x - bbox.min_x, wy = bbox.max_y - bbox.min_y;
    const double cx = 0.5 * (bbox.min_x + bbox.max_x), cy = 0.5 * (bbox.min_y + bbox.max_y);

    // Accumulate about the box center (shifted data) to limit cancellation.
    std::size_t hits = 0;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const Vec2 q{bbox.min_x + wx * rng.uniform(2 * k), bbox.min_y + wy * rng.uniform(2 * k + 1)};
        if (!inside(q)) continue;
        ++hits;
        const double dx = q.x - cx, dy = q.y - cy;
        sx += dx;
        sy += dy;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (static_cast<double>(hits) < 1e-3 * static_cast<double>(n_samples) || hits < 2)
        throw RegionTooThin("Monte Carlo acceptance rate below 1e-3");
    const double h = static_cast<double>(hits);
    Moments m;
    const double mx = sx / h, my = sy / h;
    m.mean_x = cx + mx;
    m.mean_y = cy + my;
    m.var_x = sxx / h - mx * mx;
    m.var_y = syy / h - my * my;
    m.cov_xy = sxy / h - mx * my;
    return finish_moments(m);
}

Moments point_moments(std::span<const Vec2> points) {
    if (points.size() < 2) throw StatsError("need at least two points for swarm statistics");
    const double n = static_cast<double>(points.size());
    Vec2 mean{};
    for (const Vec2& p : points) mean += p;
    mean = mean * (1.0 / n);
    double sxx = 0, syy = 0, sxy = 0;
    for (const Vec2& p : points) {
        const Vec2 d = p - mean;
        sxx += d.x * d.x;
        syy += d.y * d.y;
        sxy += d.x * d.y;
    }
    Moments m;
    m.mean_x = mean.x;
    m.mean_y = mean.y;
    m.var_x = sxx / n;
    m.var_y = syy / n;
    m.cov_xy = sxy / n;
    return finish_moments(m);
}

}  // namespace swarmshape

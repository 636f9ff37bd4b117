#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace swarmshape {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// First and second moments of a planar distribution (population convention).
struct Moments {
    double mean_x = 0.0;
    double mean_y = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double cov_xy = 0.0;
    double corr = 0.0;
    /// Set when either variance vanishes and `corr` is reported as 0.
    bool degenerate = false;
};

/// Fills `corr` and `degenerate` from the variance/covariance fields.
Moments finish_moments(Moments m);

/// Regions below this area are rejected as degenerate.
inline constexpr double kDegenerateArea = 1e-12;

/// Simple polygon, stored counterclockwise. Construction normalizes the
/// orientation and drops repeated consecutive vertices.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> vertices);

    std::span<const Vec2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    Polygon translated(Vec2 d) const;
    Polygon rotated(double angle, Vec2 about = {}) const;
    Polygon reversed() const;

    /// Even-odd point membership (boundary points may go either way).
    bool contains(Vec2 p) const;

private:
    std::vector<Vec2> vertices_;
};

double signed_area(std::span<const Vec2> vertices);

/// Shoelace area. Throws DegenerateRegion below kDegenerateArea.
double polygon_area(const Polygon& p);

/// Exact uniform-density moments of the polygon via per-edge line integrals.
Moments polygon_moments(const Polygon& p);

struct BoundingBox {
    double min_x, min_y, max_x, max_y;
};

/// Counter-based generator: the k-th draw of stream `seed` depends only on
/// (seed, k), so sample partitions never change results.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    std::uint64_t at(std::uint64_t counter) const;
    double uniform(std::uint64_t counter) const;  // [0, 1)

private:
    std::uint64_t seed_;
};

/// Rejection-sampled moments of the region {p in bbox : inside(p)}.
/// Throws DomainError when n_samples < 10^4 and RegionTooThin when the
/// acceptance rate falls below 1e-3.
Moments monte_carlo_moments(const std::function<bool(Vec2)>& inside, BoundingBox bbox,
                            std::size_t n_samples, std::uint64_t seed);

/// Sample moments of a point set with divisor n. Throws StatsError for n < 2.
Moments point_moments(std::span<const Vec2> points);

}  // namespace swarmshape

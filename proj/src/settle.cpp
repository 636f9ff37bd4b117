#include "swarmshape/settle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swarmshape/errors.hpp"

namespace swarmshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBreakpointTol = 1e-12;

double safe_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

void check_square_spec(const SquareFillSpec& spec) {
    if (!std::isfinite(spec.beta)) throw DomainError("beta must be finite");
    if (!(spec.area > 0.0 && spec.area <= 1.0)) throw DomainError("square fill area must lie in (0, 1]");
}

bool is_full(double area) { return area >= 1.0 - 1e-15; }

struct Trig {
    double tan_b;
    double cot_b;
};

Trig trig(double beta) {
    const double s = std::sin(beta), c = std::cos(beta);
    return {s / c, c / s};
}

}  // namespace

double normalize_angle(double beta) {
    double b = std::fmod(beta, 2.0 * kPi);
    if (b < 0.0) b += 2.0 * kPi;
    if (b >= 2.0 * kPi) b = 0.0;
    return b;
}

int square_case(const SquareFillSpec& spec) {
    check_square_spec(spec);
    if (is_full(spec.area)) return 0;
    const double b = normalize_angle(spec.beta);
    const double t = std::atan(2.0 * std::min(spec.area, 1.0 - spec.area));
    // Intervals are (lo, hi]; the first case also covers beta == 0.
    const double q = kPi / 2.0;
    if (b <= t + kBreakpointTol || b > 2.0 * kPi - t + kBreakpointTol) return 1;
    const double edges[] = {q - t, q + t, kPi - t, kPi + t, 3 * q - t, 3 * q + t, 2 * kPi - t};
    for (int i = 0; i < 7; ++i)
        if (b <= edges[i] + kBreakpointTol) return i + 2;
    return 1;
}

Polygon square_region(const SquareFillSpec& spec) {
    const int c = square_case(spec);
    if (c == 0) return Polygon({{1, 0}, {0, 0}, {0, 1}, {1, 1}});
    const double A = spec.area;
    const auto [tb, cb] = trig(normalize_angle(spec.beta));
    std::vector<Vec2> v;
    if (A <= 0.5) {
        switch (c) {
            case 1: v = {{1, 0}, {1, 1}, {1 - A - tb / 2, 1}, {1 - A + tb / 2, 0}}; break;
            case 2: v = {{1, 1}, {1 - safe_sqrt(2 * A * tb), 1}, {1, 1 - safe_sqrt(2 * A * cb)}}; break;
            case 3: v = {{1, 1}, {0, 1}, {0, 1 - A + cb / 2}, {1, 1 - A - cb / 2}}; break;
            case 4: v = {{0, 1}, {safe_sqrt(-2 * A * tb), 1}, {0, 1 - safe_sqrt(-2 * A * cb)}}; break;
            case 5: v = {{0, 0}, {0, 1}, {A - tb / 2, 1}, {A + tb / 2, 0}}; break;
            case 6: v = {{0, 0}, {0, safe_sqrt(2 * A * cb)}, {safe_sqrt(2 * A * tb), 0}}; break;
            case 7: v = {{0, 0}, {1, 0}, {1, A - cb / 2}, {0, A + cb / 2}}; break;
            default: v = {{1, 0}, {1 - safe_sqrt(-2 * A * tb), 0}, {1, safe_sqrt(-2 * A * cb)}}; break;
        }
    } else {
        // Corner-removed squares carry the empty triangle of area 1 - A.
        const double E = 1.0 - A;
        switch (c) {
            case 1: v = {{1, 0}, {1, 1}, {E - tb / 2, 1}, {E + tb / 2, 0}}; break;
            case 2: v = {{1, 0}, {1, 1}, {0, 1}, {0, safe_sqrt(2 * E * cb)}, {safe_sqrt(2 * E * tb), 0}}; break;
            case 3: v = {{0, 1}, {1, 1}, {1, E - cb / 2}, {0, E + cb / 2}}; break;
            case 4:
                v = {{1, 1}, {0, 1}, {0, 0}, {1 - safe_sqrt(-2 * E * tb), 0}, {1, safe_sqrt(-2 * E * cb)}};
                break;
            case 5: v = {{0, 0}, {0, 1}, {A - tb / 2, 1}, {A + tb / 2, 0}}; break;
            case 6:
                v = {{1, 0}, {0, 0}, {0, 1}, {1 - safe_sqrt(2 * E * tb), 1}, {1, 1 - safe_sqrt(2 * E * cb)}};
                break;
            case 7: v = {{1, 0}, {0, 0}, {0, A + cb / 2}, {1, A - cb / 2}}; break;
            default:
                v = {{0, 0}, {1, 0}, {1, 1}, {safe_sqrt(-2 * E * tb), 1}, {0, 1 - safe_sqrt(-2 * E * cb)}};
                break;
        }
    }
    return Polygon(std::move(v));
}

double square_mean_x(const SquareFillSpec& spec) {
    const int c = square_case(spec);
    if (c == 0) return 0.5;
    const double A = spec.area;
    const auto [tb, cb] = trig(normalize_angle(spec.beta));
    const double r2 = std::numbers::sqrt2;
    if (A <= 0.5) {
        switch (c) {
            case 1: return -tb * tb / (24 * A) - A / 2 + 1;
            case 2: return 1 - r2 * safe_sqrt(A * tb) / 3;
            case 3: return cb / (12 * A) + 0.5;
            case 4: return r2 * safe_sqrt(-A * tb) / 3;
            case 5: return tb * tb / (24 * A) + A / 2;
            case 6: return r2 * safe_sqrt(A * tb) / 3;
            case 7: return 0.5 - cb / (12 * A);
            default: return 1 - r2 * safe_sqrt(-A * tb) / 3;
        }
    }
    switch (c) {
        case 1: return -tb * tb / (24 * A) - A / 2 + 1;
        case 2: return (2 * r2 * safe_sqrt((1 - A) * tb) * (A - 1) + 3) / (6 * A);
        case 3: return (6 * A + cb) / (12 * A);
        case 4: return (-2 * r2 * safe_sqrt((A - 1) * tb) * (A - 1) + 6 * A - 3) / (6 * A);
        case 5: return tb * tb / (24 * A) + A / 2;
        case 6: return (2 * r2 * safe_sqrt((1 - A) * tb) * (1 - A) + 6 * A - 3) / (6 * A);
        case 7: return 0.5 - cb / (12 * A);
        default: return (2 * r2 * safe_sqrt((A - 1) * tb) * (A - 1) + 3) / (6 * A);
    }
}

Moments square_moments(const SquareFillSpec& spec) {
    Moments m = polygon_moments(square_region(spec));
    m.mean_x = square_mean_x(spec);
    return m;
}

double circle_chord_area(double h) {
    if (!(h >= 0.0 && h <= 2.0)) throw DomainError("fill height must lie in [0, 2]");
    return std::acos(1.0 - h) - (1.0 - h) * safe_sqrt((2.0 - h) * h);
}

double circle_fill_height(double area) {
    if (!(area >= 0.0 && area <= kPi)) throw DomainError("chord area must lie in [0, pi]");
    double lo = 0.0, hi = 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (circle_chord_area(mid) < area ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

void check_height(double h) {
    if (!(h > 0.0 && h <= 2.0)) throw DomainError("fill height must lie in (0, 2]");
}

// sqrt(-(h-2)h)(h-1) + arccos(1-h), which equals the chord area.
double chord_denominator(double h) { return safe_sqrt(-(h - 2) * h) * (h - 1) + std::acos(1 - h); }

}  // namespace

double circle_mean_radius(double h) {
    check_height(h);
    return 2.0 * std::pow(safe_sqrt(-(h - 2) * h), 3) / (3.0 * chord_denominator(h));
}

double circle_depth_variance(double h) {
    check_height(h);
    const double d = chord_denominator(h);
    const double first = 64.0 * std::pow(h - 2, 3) * std::pow(h, 3);
    const double second = 9.0 * d * (std::sin(4.0 * std::asin(1 - h)) + 4.0 * std::acos(1 - h));
    return (first + second) / (144.0 * d * d);
}

double circle_chord_variance(double h) {
    check_height(h);
    const double th = std::acos(1 - h);
    return (12.0 * th - 8.0 * std::sin(2.0 * th) + std::sin(4.0 * th)) / (48.0 * chord_denominator(h));
}

Moments circle_moments(const CircleFillSpec& spec) {
    if (!std::isfinite(spec.beta)) throw DomainError("beta must be finite");
    const double h = spec.fill_height;
    const double r = circle_mean_radius(h);
    const double vd = circle_depth_variance(h), vc = circle_chord_variance(h);
    const double c = std::cos(spec.beta), s = std::sin(spec.beta);
    Moments m;
    m.mean_x = r * c;
    m.mean_y = r * s;
    // R(beta) diag(vd, vc) R(beta)^T
    m.var_x = vd * c * c + vc * s * s;
    m.var_y = vd * s * s + vc * c * c;
    m.cov_xy = (vd - vc) * s * c;
    return finish_moments(m);
}

std::vector<SweepRow> sweep_statistics(Workspace2D workspace, const std::vector<double>& fills,
                                       int beta_samples) {
    if (fills.empty() || beta_samples <= 0) throw DomainError("sweep needs fills and a positive beta count");
    std::vector<SweepRow> rows;
    rows.reserve(fills.size() * static_cast<std::size_t>(beta_samples));
    for (double fill : fills) {
        for (int j = 0; j < beta_samples; ++j) {
            const double beta = 2.0 * kPi * j / beta_samples;
            const Moments m = workspace == Workspace2D::square ? square_moments({beta, fill})
                                                              : circle_moments({beta, fill});
            rows.push_back({fill, beta, m});
        }
    }
    return rows;
}

}  // namespace swarmshape

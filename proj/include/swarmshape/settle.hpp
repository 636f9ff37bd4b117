#pragma once

#include <vector>

#include "swarmshape/geometry.hpp"

namespace swarmshape {

/// Swarm of area `area` settled in the unit square [0,1]^2 under a global
/// force pointing along `beta`. The swarm piles up on the side `beta` points to.
struct SquareFillSpec {
    double beta = 0.0;
    double area = 0.5;
};

/// Swarm settled in the unit disc centered at the origin, filling a chord
/// region of depth `fill_height` on the side `beta` points to.
struct CircleFillSpec {
    double beta = 0.0;
    double fill_height = 1.0;
};

/// Wraps any angle into [0, 2*pi).
double normalize_angle(double beta);

/// Which of the eight settled shapes applies (1..8 counterclockwise from the
/// right wall), or 0 for the full square.
int square_case(const SquareFillSpec& spec);

/// Settled region in the unit square. Throws DomainError for A outside (0, 1].
Polygon square_region(const SquareFillSpec& spec);

/// Piecewise closed form of the mean x-position of the settled region.
double square_mean_x(const SquareFillSpec& spec);

/// Moments of the settled region: mean_x from the closed form, the remaining
/// fields from the polygon engine.
Moments square_moments(const SquareFillSpec& spec);

/// Area under a chord at depth h in the unit disc. Requires 0 <= h <= 2.
double circle_chord_area(double h);

/// Inverse of circle_chord_area. Requires 0 <= A <= pi.
double circle_fill_height(double area);

/// Distance from the disc center to the centroid of the chord region; 0 < h <= 2.
double circle_mean_radius(double h);

/// Variance along the settling direction (depth axis) for beta = 0.
double circle_depth_variance(double h);

/// Variance along the chord for beta = 0.
double circle_chord_variance(double h);

Moments circle_moments(const CircleFillSpec& spec);

enum class Workspace2D { square, circle };

struct SweepRow {
    double fill = 0.0;  // A for the square, h for the circle
    double beta = 0.0;
    Moments moments;
};

/// One row per (fill, beta) with beta_j = 2*pi*j/beta_samples.
std::vector<SweepRow> sweep_statistics(Workspace2D workspace, const std::vector<double>& fills,
                                       int beta_samples);

}  // namespace swarmshape

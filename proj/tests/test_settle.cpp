#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "swarmshape/errors.hpp"
#include "swarmshape/settle.hpp"

using namespace swarmshape;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("settle") {

TEST_CASE("band against the right wall") {
    const double A = 0.3;
    const Moments m = square_moments({0.0, A});
    CHECK(m.mean_x == Approx(1 - A / 2));
    CHECK(m.mean_y == Approx(0.5));
    CHECK(m.var_x == Approx(A * A / 12));
    CHECK(m.var_y == Approx(1.0 / 12));
    CHECK(std::abs(m.cov_xy) < 1e-12);
}

TEST_CASE("full square for A = 1") {
    const Moments m = square_moments({1.234, 1.0});
    CHECK(square_case({1.234, 1.0}) == 0);
    CHECK(m.mean_x == Approx(0.5));
    CHECK(m.var_x == Approx(1.0 / 12));
    CHECK(std::abs(m.cov_xy) < 1e-12);
}

TEST_CASE("settled region has area A and matches the half-plane oracle") {
    for (double A : {0.05, 0.18, 0.5, 0.77, 0.95}) {
        for (int j = 0; j < 72; ++j) {
            const double beta = 2 * kPi * j / 72 + 0.013;
            const Polygon region = square_region({beta, A});
            CHECK(polygon_area(region) == Approx(A).epsilon(1e-12));
            const auto ref = oracle::settled_square(beta, A);
            const Moments o = oracle::fan_moments(ref);
            const Moments m = square_moments({beta, A});
            CHECK(std::abs(m.mean_x - o.mean_x) < 1e-9);
            CHECK(std::abs(m.mean_y - o.mean_y) < 1e-9);
            CHECK(std::abs(m.var_x - o.var_x) < 1e-9);
            CHECK(std::abs(m.var_y - o.var_y) < 1e-9);
            CHECK(std::abs(m.cov_xy - o.cov_xy) < 1e-9);
        }
    }
}

TEST_CASE("closed-form mean_x equals the polygon centroid") {
    for (double A : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (int j = 0; j < 360; ++j) {
            const SquareFillSpec s{2 * kPi * j / 360, A};
            CHECK(square_mean_x(s) == Approx(polygon_moments(square_region(s)).mean_x).epsilon(1e-12));
        }
    }
}

TEST_CASE("lower-left triangle has negative covariance") {
    // beta = 5pi/4, A = 0.18: legs 0.6 and 0.6 along the walls.
    const Moments m = square_moments({5 * kPi / 4, 0.18});
    CHECK(m.cov_xy == Approx(-0.01).epsilon(1e-12));
    CHECK(m.corr == Approx(-0.5).epsilon(1e-12));
    CHECK(m.mean_x == Approx(0.2));
}

TEST_CASE("symmetry: mirroring beta mirrors the moments") {
    for (double A : {0.2, 0.6}) {
        for (double beta : {0.3, 1.1, 2.0}) {
            const Moments a = square_moments({beta, A});
            const Moments b = square_moments({kPi - beta, A});  // x -> 1 - x
            CHECK(b.mean_x == Approx(1 - a.mean_x).epsilon(1e-12));
            CHECK(b.var_x == Approx(a.var_x).epsilon(1e-12));
            CHECK(b.cov_xy == Approx(-a.cov_xy).epsilon(1e-9));
        }
    }
}

TEST_CASE("angle normalisation and domain errors") {
    CHECK(normalize_angle(-kPi / 2) == Approx(3 * kPi / 2));
    CHECK(normalize_angle(4 * kPi) == Approx(0.0));
    const Moments a = square_moments({0.4, 0.3}), b = square_moments({0.4 + 2 * kPi, 0.3});
    CHECK(a.mean_y == Approx(b.mean_y).epsilon(1e-12));
    CHECK_THROWS_AS(square_region({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(square_region({0.0, 1.5}), DomainError);
    CHECK_THROWS_AS(circle_chord_area(2.5), DomainError);
    CHECK_THROWS_AS(circle_fill_height(4.0), DomainError);
}

TEST_CASE("circle closed forms match quadrature") {
    for (double h : {0.05, 0.3, 0.92, 1.0, 1.43, 1.8, 1.999}) {
        const auto q = oracle::circle_region(h);
        CHECK(circle_chord_area(h) == Approx(q.area).epsilon(1e-10));
        CHECK(circle_mean_radius(h) == Approx(q.mean_x).epsilon(1e-9));
        CHECK(circle_depth_variance(h) == Approx(q.var_x).epsilon(1e-8));
        CHECK(circle_chord_variance(h) == Approx(q.var_y).epsilon(1e-8));
    }
}

TEST_CASE("full disc and chord inverse") {
    CHECK(circle_chord_area(2.0) == Approx(kPi));
    CHECK(circle_depth_variance(2.0) == Approx(0.25));
    CHECK(circle_chord_variance(2.0) == Approx(0.25));
    for (double h : {0.1, 0.7, 1.0, 1.6}) CHECK(circle_fill_height(circle_chord_area(h)) == Approx(h).epsilon(1e-10));
}

TEST_CASE("circle moments rotate with beta") {
    const double h = 0.8, beta = 1.1;
    const Moments m = circle_moments({beta, h});
    const double r = circle_mean_radius(h), vd = circle_depth_variance(h), vc = circle_chord_variance(h);
    CHECK(m.mean_x == Approx(r * std::cos(beta)));
    CHECK(m.mean_y == Approx(r * std::sin(beta)));
    CHECK(m.var_x == Approx(vd * std::cos(beta) * std::cos(beta) + vc * std::sin(beta) * std::sin(beta)));
    CHECK(m.cov_xy == Approx((vd - vc) * std::sin(beta) * std::cos(beta)));
}

TEST_CASE("sweep rows") {
    const auto rows = sweep_statistics(Workspace2D::square, {0.2, 0.4}, 8);
    REQUIRE(rows.size() == 16);
    CHECK(rows[1].beta == Approx(kPi / 4));
    CHECK(rows[9].fill == 0.4);
    CHECK_THROWS(sweep_statistics(Workspace2D::circle, {1.0}, 0));
}

}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "swarmshape/errors.hpp"
#include "swarmshape/friction.hpp"

using namespace swarmshape;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("friction") {

TEST_CASE("frictionless wall passes the tangential component") {
    for (double th : {0.1, 0.7, 1.5, -0.4}) CHECK(forward_force(2.0, th, {0.0}) == Approx(2.0 * std::sin(th)));
}

TEST_CASE("infinite friction pins a robot pushed along or into the wall") {
    const auto inf = FrictionParams::infinite();
    CHECK(inf.is_infinite());
    CHECK(forward_force(1.0, 0.0, inf) == 0.0);
    CHECK(forward_force(1.0, 1.2, inf) == 0.0);
    CHECK(forward_force(1.0, -1.2, inf) == 0.0);
    // Pulling away from the wall: no friction.
    CHECK(forward_force(1.0, 2.0, inf) == Approx(std::sin(2.0)));
}

TEST_CASE("stiction clamp: friction never reverses the drive") {
    const double mu = 0.5;
    const double th_c = std::atan(mu);  // mu cos = sin
    CHECK(forward_force(1.0, th_c * 0.99, {mu}) == 0.0);
    CHECK(forward_force(1.0, th_c, {mu}) == Approx(0.0).epsilon(1e-15));
    CHECK(forward_force(1.0, 1.2, {mu}) == Approx(std::sin(1.2) - mu * std::cos(1.2)));
}

TEST_CASE("odd in theta and 2 pi periodic") {
    for (double mu : {0.0, 0.3, 2.0}) {
        for (double th : {0.2, 0.9, 1.4, 2.5, 3.0}) {
            CHECK(forward_force(1.5, -th, {mu}) == Approx(-forward_force(1.5, th, {mu})).epsilon(1e-14));
            CHECK(forward_force(1.5, th + 2 * kPi, {mu}) == Approx(forward_force(1.5, th, {mu})).epsilon(1e-12));
        }
    }
}

TEST_CASE("magnitude never exceeds the free tangential force") {
    for (int i = 0; i < 200; ++i) {
        const double th = -kPi + 2 * kPi * i / 200.0;
        const double f = forward_force(3.0, th, {0.7});
        CHECK(std::abs(f) <= std::abs(3.0 * std::sin(th)) + 1e-15);
        CHECK(f * std::sin(th) >= 0.0);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(forward_force(-1.0, 0.0, {0.1}), DomainError);
    CHECK_THROWS_AS(forward_force(1.0, 0.0, {-0.1}), DomainError);
    CHECK_THROWS_AS(forward_force(1.0, NAN, {0.1}), DomainError);
    CHECK_THROWS_AS(boundary_layer_velocity({1.0, 1.0}, -0.1), DomainError);
    CHECK_THROWS_AS(boundary_layer_velocity({1.0, 0.0}, 0.1), DomainError);
}

TEST_CASE("boundary layer profile") {
    const BoundaryLayerSpec s{2.0, 0.5};
    CHECK(boundary_layer_velocity(s, 0.0) == 0.0);
    CHECK(boundary_layer_velocity(s, 0.5) == Approx(2.0));
    CHECK(boundary_layer_velocity(s, 3.0) == 2.0);
    CHECK(boundary_layer_velocity(s, 0.25) == Approx(1.5));
    // Monotone inside the layer.
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double u = boundary_layer_velocity(s, 0.5 * i / 50.0);
        CHECK(u >= prev);
        prev = u;
    }
}

}

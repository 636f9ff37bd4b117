#include "swarmshape/friction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swarmshape/errors.hpp"

namespace swarmshape {

double forward_force(double force, double theta, const FrictionParams& params) {
    if (!(force >= 0.0) || !std::isfinite(force)) throw DomainError("force magnitude must be finite and >= 0");
    if (!(params.mu_f >= 0.0)) throw DomainError("friction coefficient must be >= 0");
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");

    // Wrap into (-pi, pi] so "pressing into the wall" is |theta| < pi/2.
    double t = std::remainder(theta, 2.0 * std::numbers::pi);
    const double tangential = force * std::sin(t);
    if (std::abs(t) >= std::numbers::pi / 2) return tangential;

    const double normal = force * std::cos(t);
    if (params.is_infinite()) return 0.0;
    const double friction = std::min(params.mu_f * normal, std::abs(tangential));
    return std::copysign(std::abs(tangential) - friction, tangential);
}

double boundary_layer_velocity(const BoundaryLayerSpec& spec, double y) {
    if (!(spec.layer_height > 0.0)) throw DomainError("boundary layer height must be positive");
    if (!(y >= 0.0)) throw DomainError("distance from the wall must be >= 0");
    if (y > spec.layer_height) return spec.u0;
    const double eta = y / spec.layer_height;
    return spec.u0 * eta * (2.0 - eta);
}

}  // namespace swarmshape

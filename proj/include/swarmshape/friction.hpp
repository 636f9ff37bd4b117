#pragma once

#include <limits>

namespace swarmshape {

/// Coulomb wall friction. `mu_f` may be +infinity for the pinning model.
struct FrictionParams {
    double mu_f = 0.0;

    static FrictionParams infinite() { return {std::numeric_limits<double>::infinity()}; }
    bool is_infinite() const { return mu_f == std::numeric_limits<double>::infinity(); }
};

struct BoundaryLayerSpec {
    double u0 = 1.0;
    double layer_height = 1.0;
};

/// Net force along the wall for a robot pushed with magnitude F at angle
/// theta from the inward wall normal. Friction only acts while |theta| < pi/2
/// and is clamped so it never reverses the tangential drive. Result has the
/// sign of sin(theta) (or is zero).
double forward_force(double force, double theta, const FrictionParams& params);

/// Parabolic boundary-layer profile u0 (y/h)(2 - y/h), free stream above h.
double boundary_layer_velocity(const BoundaryLayerSpec& spec, double y);

}  // namespace swarmshape

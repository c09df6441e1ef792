#ifndef AERIS_GEOMETRY_HPP
#define AERIS_GEOMETRY_HPP

#include "aeris/rng.hpp"

namespace aeris::geometry {

// Position of the aerial platform in the unit normalization cylinder:
// azimuth in [0, 2*pi), radial distance in [0, 0.5], height in [0, 1].
struct CylindricalPosition {
    double azimuth;
    double radial;
    double height;
};

struct CartesianPosition {
    double x;
    double y;
    double z;
};

// Ground endpoints of the link on the cylinder's base circle.
inline constexpr CartesianPosition kSourcePosition{-0.5, 0.0, 0.0};
inline constexpr CartesianPosition kDestinationPosition{0.5, 0.0, 0.0};

// Volume-uniform draw inside the cylinder: azimuth ~ U(0, 2*pi),
// radial = 0.5*sqrt(U(0,1)) (area-uniform disk), height ~ U(0, 1).
CylindricalPosition sample_position(RngHandle& rng);

// x = r*sin(azimuth), y = r*cos(azimuth), z = height.
CartesianPosition to_cartesian(const CylindricalPosition& pos);

double distance(const CartesianPosition& a, const CartesianPosition& b);

// Path-loss spread Omega = d^{-eta}, d > 0, eta > 0.
double path_loss_spread(double d, double eta);

// Smallest separation admitted when mapping node distances to spreads;
// keeps Omega finite at the (measure-zero) positions where the platform
// touches a ground endpoint.
inline constexpr double kMinSeparation = 1e-6;

} // namespace aeris::geometry

#endif

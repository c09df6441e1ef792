#include "aeris/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aeris::geometry {

CylindricalPosition sample_position(RngHandle& rng) {
    CylindricalPosition pos;
    pos.azimuth = 2.0 * std::numbers::pi * rng.uniform();
    pos.radial = 0.5 * std::sqrt(rng.uniform());
    pos.height = rng.uniform();
    return pos;
}

CartesianPosition to_cartesian(const CylindricalPosition& pos) {
    return CartesianPosition{pos.radial * std::sin(pos.azimuth),
                             pos.radial * std::cos(pos.azimuth), pos.height};
}

double distance(const CartesianPosition& a, const CartesianPosition& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double path_loss_spread(double d, double eta) {
    if (!(d > 0.0)) {
        throw std::domain_error("path_loss_spread: requires d > 0");
    }
    if (!(eta > 0.0)) {
        throw std::domain_error("path_loss_spread: requires eta > 0");
    }
    return std::pow(d, -eta);
}

} // namespace aeris::geometry

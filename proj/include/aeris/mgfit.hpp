#ifndef AERIS_MGFIT_HPP
#define AERIS_MGFIT_HPP

#include "aeris/matching.hpp"
#include "aeris/specfun.hpp"

#include <complex>
#include <vector>

namespace aeris::mgfit {

// Mixture-Gamma representation of the per-element cascade W = G / L~^2:
// pdf(y) = sum_k xi_k * y^{shape-1} e^{-y/zeta_k} / Gamma(shape). The
// normalization is analytic (sum_k xi_k zeta_k^shape = 1), so the density
// integrates to one by construction.
struct MixtureComponent {
    double weight;  // xi_k
    double scale;   // zeta_k
};

struct MixtureGamma {
    double shape = 0.0;  // common shape, from the fading-product fit
    std::vector<MixtureComponent> components;

    int order() const { return static_cast<int>(components.size()); }
};

// Builds the K-component mixture from the two Gamma fits and a
// Gauss-Laguerre rule of order K.
MixtureGamma build_mixture(const matching::GammaFit& fit_g,
                           const matching::GammaFit& fit_l,
                           const specfun::QuadratureRule& rule);

double mixture_pdf(const MixtureGamma& mg, double y);

// Laplace transform sum_k xi_k (1/zeta_k + v)^{-shape}, Re v >= 0,
// principal branch.
std::complex<double> mixture_laplace(const MixtureGamma& mg, std::complex<double> v);

} // namespace aeris::mgfit

#endif

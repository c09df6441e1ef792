#ifndef AERIS_DISTRIBUTIONS_HPP
#define AERIS_DISTRIBUTIONS_HPP

#include "aeris/rng.hpp"

namespace aeris {

// Nakagami-m magnitude fading: shape m >= 1/2, spread Omega = E[X^2] > 0.
struct NakagamiParams {
    double m;
    double omega;

    NakagamiParams(double shape, double spread);
};

// Inverse-Gamma shadowing: shape alpha > 1 (finite mean), scale beta > 0.
struct InverseGammaParams {
    double alpha;
    double beta;

    InverseGammaParams(double shape, double scale);
};

// Gamma variate with shape nu > 0 and scale zeta > 0.
struct GammaParams {
    double nu;
    double zeta;

    GammaParams(double shape, double scale);
};

double nakagami_pdf(const NakagamiParams& params, double x);
double inverse_gamma_pdf(const InverseGammaParams& params, double x);
double gamma_pdf(const GammaParams& params, double x);

// Draws use explicit, documented transformations so streams are
// reproducible: Nakagami as sqrt(Gamma(m, Omega/m)), inverse-Gamma as the
// reciprocal of Gamma(alpha, 1/beta), Gamma via Marsaglia-Tsang.
double sample_nakagami(const NakagamiParams& params, RngHandle& rng);
double sample_inverse_gamma(const InverseGammaParams& params, RngHandle& rng);
double sample_gamma(const GammaParams& params, RngHandle& rng);

// Uniform on [0, 2*pi).
double sample_uniform_phase(RngHandle& rng);

} // namespace aeris

#endif

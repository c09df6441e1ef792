#ifndef AERIS_MATCHING_HPP
#define AERIS_MATCHING_HPP

#include "aeris/distributions.hpp"

namespace aeris::matching {

// Per-hop composite-channel parameters for the two hops of one reflecting
// element: Nakagami fading (source side, destination side) and
// inverse-Gamma shadowing (source side, destination side).
struct HopPairParams {
    NakagamiParams nakagami_s;
    NakagamiParams nakagami_d;
    InverseGammaParams ig_s;
    InverseGammaParams ig_d;
};

// Two-moment Gamma fit: shape * scale reproduces the matched mean exactly
// and shape * (1 + shape) * scale^2 the matched second moment.
struct GammaFit {
    double shape;
    double scale;
    double matched_mean;
    double matched_second_moment;
};

// n-th moment of the fading product G = G_s * G_d.
double moment_g_product(const HopPairParams& params, int n);

// n-th moment of the reciprocal-root shadowing product
// L~ = 1 / sqrt(L_s * L_d).
double moment_l_tilde(const HopPairParams& params, int n);

// Exact product PDFs (Bessel-K closed forms).
double exact_pdf_g_product(const HopPairParams& params, double z);
double exact_pdf_l_tilde(const HopPairParams& params, double z);

// Method-of-moments Gamma fits to G and L~.
GammaFit fit_g_to_gamma(const HopPairParams& params);
GammaFit fit_l_tilde_to_gamma(const HopPairParams& params);

} // namespace aeris::matching

#endif

#include "aeris/matching.hpp"
#include "aeris/errors.hpp"
#include "aeris/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace aeris::matching {

using specfun::bessel_k;
using specfun::ln_gamma;

double moment_g_product(const HopPairParams& params, int n) {
    if (n < 1) {
        throw std::invalid_argument("moment_g_product: requires n >= 1");
    }
    const double ms = params.nakagami_s.m;
    const double md = params.nakagami_d.m;
    const double upsilon =
        ms * md / (params.nakagami_s.omega * params.nakagami_d.omega);
    const double half_n = 0.5 * n;
    // log-space to keep large shapes from overflowing the Gamma ratios
    const double log_moment = -half_n * std::log(upsilon) + ln_gamma(ms + half_n) +
                              ln_gamma(md + half_n) - ln_gamma(ms) - ln_gamma(md);
    return std::exp(log_moment);
}

double moment_l_tilde(const HopPairParams& params, int n) {
    if (n < 1) {
        throw std::invalid_argument("moment_l_tilde: requires n >= 1");
    }
    const double as = params.ig_s.alpha;
    const double ad = params.ig_d.alpha;
    const double bs = params.ig_s.beta;
    const double bd = params.ig_d.beta;
    const double half_n = 0.5 * n;
    const double log_moment = ln_gamma(as + half_n) + ln_gamma(ad + half_n) -
                              ln_gamma(as) - ln_gamma(ad) -
                              half_n * std::log(bs * bd);
    return std::exp(log_moment);
}

double exact_pdf_g_product(const HopPairParams& params, double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("exact_pdf_g_product: requires z > 0");
    }
    const double ms = params.nakagami_s.m;
    const double md = params.nakagami_d.m;
    const double upsilon =
        ms * md / (params.nakagami_s.omega * params.nakagami_d.omega);
    const double order_sum = ms + md;
    const double log_front = std::log(4.0) + (order_sum - 1.0) * std::log(z) +
                             0.5 * order_sum * std::log(upsilon) - ln_gamma(ms) -
                             ln_gamma(md);
    return std::exp(log_front) * bessel_k(md - ms, 2.0 * z * std::sqrt(upsilon));
}

double exact_pdf_l_tilde(const HopPairParams& params, double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("exact_pdf_l_tilde: requires z > 0");
    }
    const double as = params.ig_s.alpha;
    const double ad = params.ig_d.alpha;
    const double bprod = params.ig_s.beta * params.ig_d.beta;
    const double order_sum = as + ad;
    const double log_front = std::log(4.0) + 0.5 * order_sum * std::log(bprod) +
                             (order_sum - 1.0) * std::log(z) - ln_gamma(as) -
                             ln_gamma(ad);
    return std::exp(log_front) * bessel_k(as - ad, 2.0 * z * std::sqrt(bprod));
}

namespace {

GammaFit two_moment_fit(double mean, double second_moment, const char* what) {
    const double variance = second_moment - mean * mean;
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw degeneracy_error(std::string(what) + ": matched variance is not positive");
    }
    GammaFit fit;
    fit.shape = mean * mean / variance;
    fit.scale = mean / fit.shape;
    fit.matched_mean = mean;
    fit.matched_second_moment = second_moment;
    return fit;
}

} // namespace

GammaFit fit_g_to_gamma(const HopPairParams& params) {
    const double mean = moment_g_product(params, 1);
    // E[G^2] = Omega_s * Omega_d exactly
    const double second = params.nakagami_s.omega * params.nakagami_d.omega;
    return two_moment_fit(mean, second, "fit_g_to_gamma");
}

GammaFit fit_l_tilde_to_gamma(const HopPairParams& params) {
    const double mean = moment_l_tilde(params, 1);
    // E[L~^2] = alpha_s * alpha_d / (beta_s * beta_d) exactly
    const double second = params.ig_s.alpha * params.ig_d.alpha /
                          (params.ig_s.beta * params.ig_d.beta);
    return two_moment_fit(mean, second, "fit_l_tilde_to_gamma");
}

} // namespace aeris::matching

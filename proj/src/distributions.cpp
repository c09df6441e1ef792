#include "aeris/distributions.hpp"
#include "aeris/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aeris {

NakagamiParams::NakagamiParams(double shape, double spread) : m(shape), omega(spread) {
    if (!std::isfinite(m) || !std::isfinite(omega)) {
        throw std::invalid_argument("NakagamiParams: parameters must be finite");
    }
    if (!(m >= 0.5)) {
        throw std::invalid_argument("NakagamiParams: shape m must be >= 0.5");
    }
    if (!(omega > 0.0)) {
        throw std::invalid_argument("NakagamiParams: spread must be positive");
    }
}

InverseGammaParams::InverseGammaParams(double shape, double scale) : alpha(shape), beta(scale) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::invalid_argument("InverseGammaParams: parameters must be finite");
    }
    if (!(alpha > 1.0)) {
        throw std::invalid_argument("InverseGammaParams: shape alpha must be > 1");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("InverseGammaParams: scale must be positive");
    }
}

GammaParams::GammaParams(double shape, double scale) : nu(shape), zeta(scale) {
    if (!std::isfinite(nu) || !std::isfinite(zeta)) {
        throw std::invalid_argument("GammaParams: parameters must be finite");
    }
    if (!(nu > 0.0) || !(zeta > 0.0)) {
        throw std::invalid_argument("GammaParams: shape and scale must be positive");
    }
}

double nakagami_pdf(const NakagamiParams& params, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("nakagami_pdf: requires x > 0");
    }
    const double m = params.m;
    const double ratio = m / params.omega;
    const double log_pdf = std::numbers::ln2 + m * std::log(ratio) - specfun::ln_gamma(m) +
                           (2.0 * m - 1.0) * std::log(x) - ratio * x * x;
    return std::exp(log_pdf);
}

double inverse_gamma_pdf(const InverseGammaParams& params, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("inverse_gamma_pdf: requires x > 0");
    }
    const double a = params.alpha;
    const double b = params.beta;
    const double log_pdf =
        a * std::log(b) - specfun::ln_gamma(a) - (a + 1.0) * std::log(x) - b / x;
    return std::exp(log_pdf);
}

double gamma_pdf(const GammaParams& params, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_pdf: requires x > 0");
    }
    const double log_pdf = -params.nu * std::log(params.zeta) - specfun::ln_gamma(params.nu) +
                           (params.nu - 1.0) * std::log(x) - x / params.zeta;
    return std::exp(log_pdf);
}

namespace {

// Marsaglia-Tsang squeeze sampler for Gamma(shape, 1), shape >= 1.
double gamma_unit_scale(double shape, RngHandle& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double n, v;
        do {
            n = rng.normal();
            v = 1.0 + c * n;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform_pos();
        const double n2 = n * n;
        if (u < 1.0 - 0.0331 * n2 * n2) {
            return d * v;
        }
        if (std::log(u) < 0.5 * n2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

} // namespace

double sample_gamma(const GammaParams& params, RngHandle& rng) {
    if (params.nu >= 1.0) {
        return params.zeta * gamma_unit_scale(params.nu, rng);
    }
    // shape boost: Gamma(nu) = Gamma(nu + 1) * U^{1/nu}
    const double g = gamma_unit_scale(params.nu + 1.0, rng);
    const double u = rng.uniform_pos();
    return params.zeta * g * std::pow(u, 1.0 / params.nu);
}

double sample_nakagami(const NakagamiParams& params, RngHandle& rng) {
    // X^2 ~ Gamma(m, Omega/m)
    return std::sqrt(sample_gamma(GammaParams(params.m, params.omega / params.m), rng));
}

double sample_inverse_gamma(const InverseGammaParams& params, RngHandle& rng) {
    // L = 1/Y with Y ~ Gamma(alpha, 1/beta)
    return 1.0 / sample_gamma(GammaParams(params.alpha, 1.0 / params.beta), rng);
}

double sample_uniform_phase(RngHandle& rng) {
    return 2.0 * std::numbers::pi * rng.uniform();
}

} // namespace aeris

#include "aeris/analytic.hpp"
#include "aeris/errors.hpp"
#include "aeris/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace aeris::analytic {

void SystemConfig::validate() const {
    if (n_elements < 1) {
        throw std::invalid_argument("SystemConfig: n_elements must be >= 1");
    }
    if (!(kappa > 0.0) || kappa > 1.0) {
        throw std::invalid_argument("SystemConfig: kappa must be in (0, 1]");
    }
    if (!(target_se > 0.0)) {
        throw std::invalid_argument("SystemConfig: target_se must be positive");
    }
    if (quadrature_order < 1 || quadrature_order > 64) {
        throw std::invalid_argument("SystemConfig: quadrature_order must be in [1, 64]");
    }
}

double SystemConfig::snr_threshold() const {
    return std::exp2(target_se) - 1.0;
}

double SystemConfig::avg_snr_linear() const {
    return std::pow(10.0, avg_snr_db / 10.0);
}

namespace {

// Chernoff bound on the upper tail, P(Z > z) <= exp(n ln L(-s) - s z),
// minimized over s below the smallest component rate. Far beyond the bulk
// of the distribution this pins F(z) to 1 much more tightly than the
// Bromwich window resolves there.
double chernoff_tail_bound(const mgfit::MixtureGamma& mg, int n, double z) {
    double zeta_max = 0.0;
    for (const auto& comp : mg.components) {
        zeta_max = std::max(zeta_max, comp.scale);
    }
    double best = 1.0;
    for (int i = 1; i <= 48; ++i) {
        const double s = (i / 50.0) / zeta_max;
        double mgf = 0.0;
        for (const auto& comp : mg.components) {
            const double mass =
                std::exp(std::log(comp.weight) + mg.shape * std::log(comp.scale));
            mgf += mass * std::pow(1.0 - comp.scale * s, -mg.shape);
        }
        best = std::min(best, std::exp(n * std::log(mgf) - s * z));
    }
    return best;
}

} // namespace

double cdf_sum(const mgfit::MixtureGamma& mg, int n, double z) {
    if (n < 1) {
        throw std::invalid_argument("cdf_sum: requires n >= 1");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("cdf_sum: requires z > 0");
    }

    double mean = 0.0;
    for (const auto& comp : mg.components) {
        const double mass = std::exp(std::log(comp.weight) + mg.shape * std::log(comp.scale));
        mean += mass * mg.shape * comp.scale;
    }
    double tail_bound = 1.0;
    if (z > 2.0 * n * mean) {
        tail_bound = chernoff_tail_bound(mg, n, z);
        if (tail_bound < 1e-9) {
            return 1.0;
        }
    }

    specfun::LaplaceTransformHandle handle;
    handle.convergence_abscissa = 0.0;
    handle.eval = [&mg, n](std::complex<double> v) {
        return std::pow(mixture_laplace(mg, v), n) / v;
    };
    const double inverted = specfun::inverse_laplace_cdf(handle, z);
    // the Chernoff bound gives a certified floor deep in the saturated zone
    if (tail_bound < 1e-3) {
        return std::max(inverted, 1.0 - tail_bound);
    }
    return inverted;
}

namespace {

// Recursively enumerates weak compositions (tau_1..tau_K), sum = n, and
// accumulates the Phi2 term of each.
struct CompositionSum {
    const mgfit::MixtureGamma& mg;
    int n;
    double z;
    double log_n_factorial;
    std::vector<int> tau;
    double total = 0.0;

    void visit(int k, int remaining, double log_coeff) {
        const int order = mg.order();
        if (k == order - 1) {
            tau[k] = remaining;
            accumulate(log_coeff - specfun::ln_gamma(remaining + 1.0) +
                       remaining * std::log(mg.components[k].weight));
            return;
        }
        for (int t = 0; t <= remaining; ++t) {
            tau[k] = t;
            visit(k + 1, remaining - t,
                  log_coeff - specfun::ln_gamma(t + 1.0) +
                      t * std::log(mg.components[k].weight));
        }
    }

    void accumulate(double log_coeff) {
        const int order = mg.order();
        std::vector<double> a(order), x(order);
        for (int k = 0; k < order; ++k) {
            a[k] = tau[k] * mg.shape;
            x[k] = -z / mg.components[k].scale;
        }
        const double phi2 = specfun::phi2_series(a, n * mg.shape + 1.0, x);
        total += std::exp(log_n_factorial + log_coeff) * phi2;
    }
};

} // namespace

std::size_t weak_composition_count(int n, int k) {
    if (n < 0 || k < 1) {
        throw std::invalid_argument("weak_composition_count: requires n >= 0, k >= 1");
    }
    std::size_t count = 1;
    for (int i = 1; i < k; ++i) {
        count = count * (n + i) / i;  // running binomial C(n+i, i)
    }
    return count;
}

double cdf_sum_multinomial(const mgfit::MixtureGamma& mg, int n, double z) {
    if (n < 1) {
        throw std::invalid_argument("cdf_sum_multinomial: requires n >= 1");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("cdf_sum_multinomial: requires z > 0");
    }
    if (n > 4 || mg.order() > 3) {
        throw capacity_error(
            "cdf_sum_multinomial: enumeration guard admits n <= 4 and order <= 3 "
            "(got n = " + std::to_string(n) + ", order = " + std::to_string(mg.order()) + ")");
    }

    CompositionSum sum{mg, n, z, specfun::ln_gamma(n + 1.0), std::vector<int>(mg.order()), 0.0};
    sum.visit(0, n, 0.0);

    const double n_shape = n * mg.shape;
    const double log_front = n_shape * std::log(z) - specfun::ln_gamma(n_shape + 1.0);
    const double value = std::exp(log_front) * sum.total;
    return std::clamp(value, 0.0, 1.0);
}

double cdf_z_squared(const mgfit::MixtureGamma& mg, int n, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("cdf_z_squared: requires x > 0");
    }
    return cdf_sum(mg, n, std::sqrt(x));
}

mgfit::MixtureGamma build_cascade_mixture(const matching::HopPairParams& hop_params,
                                          int quadrature_order) {
    const matching::GammaFit fit_g = matching::fit_g_to_gamma(hop_params);
    const matching::GammaFit fit_l = matching::fit_l_tilde_to_gamma(hop_params);
    return mgfit::build_mixture(fit_g, fit_l, specfun::gauss_laguerre(quadrature_order));
}

double outage_probability(const SystemConfig& config) {
    config.validate();
    const mgfit::MixtureGamma mg =
        build_cascade_mixture(config.hop_params, config.quadrature_order);
    const double threshold =
        config.snr_threshold() / (config.avg_snr_linear() * config.kappa * config.kappa);
    return cdf_z_squared(mg, config.n_elements, threshold);
}

} // namespace aeris::analytic

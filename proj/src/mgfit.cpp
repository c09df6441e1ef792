#include "aeris/mgfit.hpp"
#include "aeris/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace aeris::mgfit {

MixtureGamma build_mixture(const matching::GammaFit& fit_g,
                           const matching::GammaFit& fit_l,
                           const specfun::QuadratureRule& rule) {
    if (rule.order < 1) {
        throw std::invalid_argument("build_mixture: quadrature rule is empty");
    }
    const double shape_g = fit_g.shape;
    const double shape_l = fit_l.shape;
    const double lambda_g = fit_g.scale;
    const double lambda_l = fit_l.scale;

    const int order = rule.order;
    // zeta_k = Lambda_G / (z_k Lambda_L)^2
    // psi_k  = w_k / Gamma(m_L) * z_k^{m_L - 1} / zeta_k^{m_G}
    // xi_k   = psi_k / sum_i psi_i zeta_i^{m_G}
    // Everything is assembled in log space; the normalizer
    // sum_i psi_i zeta_i^{m_G} = sum_i w_i z_i^{m_L-1} / Gamma(m_L) stays
    // O(1), so only the individual xi_k can be extreme.
    std::vector<double> log_zeta(order), log_psi_scaled(order);
    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < order; ++k) {
        const double node = rule.nodes[k];
        log_zeta[k] = std::log(lambda_g) - 2.0 * std::log(node * lambda_l);
        // log(psi_k zeta_k^{m_G}) = log w_k + (m_L-1) log z_k - ln Gamma(m_L)
        log_psi_scaled[k] = std::log(rule.weights[k]) + (shape_l - 1.0) * std::log(node) -
                            specfun::ln_gamma(shape_l);
        max_log = std::max(max_log, log_psi_scaled[k]);
    }
    double norm_sum = 0.0;
    for (int k = 0; k < order; ++k) {
        norm_sum += std::exp(log_psi_scaled[k] - max_log);
    }
    const double log_norm = max_log + std::log(norm_sum);

    MixtureGamma mg;
    mg.shape = shape_g;
    mg.components.resize(order);
    for (int k = 0; k < order; ++k) {
        const double log_weight =
            log_psi_scaled[k] - shape_g * log_zeta[k] - log_norm;
        MixtureComponent& comp = mg.components[k];
        comp.weight = std::exp(log_weight);
        comp.scale = std::exp(log_zeta[k]);
        if (!std::isfinite(comp.weight) || !std::isfinite(comp.scale)) {
            throw instability_error("build_mixture: non-finite mixture component");
        }
    }
    return mg;
}

double mixture_pdf(const MixtureGamma& mg, double y) {
    if (!(y > 0.0)) {
        throw std::domain_error("mixture_pdf: requires y > 0");
    }
    const double log_y = std::log(y);
    const double log_gamma_shape = specfun::ln_gamma(mg.shape);
    double acc = 0.0;
    for (const MixtureComponent& comp : mg.components) {
        // xi_k y^{m_G-1} e^{-y/zeta_k} / Gamma(m_G), assembled in log space
        // because xi_k and e^{-y/zeta_k} can both be extreme yet cancel.
        const double log_term = std::log(comp.weight) + (mg.shape - 1.0) * log_y -
                                y / comp.scale - log_gamma_shape;
        acc += std::exp(log_term);
    }
    return acc;
}

std::complex<double> mixture_laplace(const MixtureGamma& mg, std::complex<double> v) {
    if (v.real() < 0.0) {
        throw std::domain_error("mixture_laplace: requires Re v >= 0");
    }
    std::complex<double> acc = 0.0;
    for (const MixtureComponent& comp : mg.components) {
        // xi_k (1/zeta_k + v)^{-m_G} = [xi_k zeta_k^{m_G}] (1 + zeta_k v)^{-m_G};
        // the bracket is the probabilistic component mass, O(1), and
        // 1 + zeta_k v stays in the right half-plane, so the principal
        // branch never jumps. The mass is assembled in log space since
        // xi_k alone can overflow for small scales.
        const double mass = std::exp(std::log(comp.weight) + mg.shape * std::log(comp.scale));
        acc += mass * std::pow(1.0 + comp.scale * v, -mg.shape);
    }
    return acc;
}

} // namespace aeris::mgfit

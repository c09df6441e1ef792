#include "aeris/specfun.hpp"
#include "aeris/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace aeris::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Taylor coefficients of 1/Gamma(1+t) around t = 0 (odd-index entries feed
// the small-mu branch of temme_gamma_pair below).
constexpr double kRecipGammaC1 = 0.57721566490153286061;
constexpr double kRecipGammaC3 = -0.04200263503409523553;
constexpr double kRecipGammaC5 = -0.04219773455554433675;
constexpr double kRecipGammaC7 = 0.00721894324666309954;
constexpr double kRecipGammaC9 = -0.00021524167411495097;

// g1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)] / (2 mu)   (continuous at mu = 0)
// g2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)] / 2
void temme_gamma_pair(double mu, double& g1, double& g2) {
    const double gampl = 1.0 / std::tgamma(1.0 + mu);
    const double gammi = 1.0 / std::tgamma(1.0 - mu);
    g2 = 0.5 * (gammi + gampl);
    if (std::abs(mu) < 1e-2) {
        const double mu2 = mu * mu;
        g1 = -(kRecipGammaC1 +
               mu2 * (kRecipGammaC3 +
                      mu2 * (kRecipGammaC5 +
                             mu2 * (kRecipGammaC7 + mu2 * kRecipGammaC9))));
    } else {
        g1 = (gammi - gampl) / (2.0 * mu);
    }
}

// Temme's series for K_mu(x) and K_{mu+1}(x), 0 < x <= 2, |mu| <= 1/2.
void bessel_k_temme(double mu, double x, double& k_mu, double& k_mu1) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = std::numeric_limits<double>::epsilon();

    const double half_x = 0.5 * x;
    const double log_term = -std::log(half_x);
    const double sigma = mu * log_term;
    const double pi_mu = kPi * mu;
    const double fact = std::abs(pi_mu) < 1e-30 ? 1.0 : pi_mu / std::sin(pi_mu);
    const double sinh_ratio = std::abs(sigma) < 1e-30 ? 1.0 : std::sinh(sigma) / sigma;

    double g1, g2;
    temme_gamma_pair(mu, g1, g2);
    const double gampl = g2 - mu * g1;
    const double gammi = g2 + mu * g1;

    double f = fact * (g1 * std::cosh(sigma) + g2 * sinh_ratio * log_term);
    const double e_sigma = std::exp(sigma);
    double p = 0.5 * e_sigma / gampl;
    double q = 0.5 / (e_sigma * gammi);
    const double mu2 = mu * mu;
    const double x2_quarter = half_x * half_x;

    double c = 1.0;
    double sum0 = f;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
        f = (i * f + p + q) / (i * i - mu2);
        p /= (i - mu);
        q /= (i + mu);
        c *= x2_quarter / i;
        const double del0 = c * f;
        sum0 += del0;
        const double del1 = c * (p - i * f);
        sum1 += del1;
        if (std::abs(del0) < std::abs(sum0) * kEps &&
            std::abs(del1) < std::abs(sum1) * kEps) {
            k_mu = sum0;
            k_mu1 = sum1 * (2.0 / x);
            return;
        }
    }
    throw convergence_error("bessel_k: small-x series did not converge", sum0, 0.0);
}

// Steed-style continued fraction (CF2) for K_mu(x) and K_{mu+1}(x), x > 2,
// |mu| <= 1/2.
void bessel_k_cf2(double mu, double x, double& k_mu, double& k_mu1) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = std::numeric_limits<double>::epsilon();

    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delta_h = d;
    double q_prev = 0.0;
    double q_cur = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delta_h;

    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double q_new = (q_prev - b * q_cur) / a;
        q_prev = q_cur;
        q_cur = q_new;
        q += c * q_new;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delta_h = (b * d - 1.0) * delta_h;
        h += delta_h;
        const double delta_s = q * delta_h;
        s += delta_s;
        if (std::abs(delta_s) < std::abs(s) * kEps) {
            h = a1 * h;
            k_mu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
            k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
            return;
        }
    }
    throw convergence_error("bessel_k: continued fraction did not converge", 0.0, 0.0);
}

// Standard Laguerre polynomial values L_n(z) and L_{n+1}(z) by upward
// recurrence.
void laguerre_pair(int n, double z, double& l_n, double& l_n1) {
    double lm = 1.0;       // L_0
    double l = 1.0 - z;    // L_1
    for (int j = 1; j < n; ++j) {
        const double lnext = ((2.0 * j + 1.0 - z) * l - j * lm) / (j + 1.0);
        lm = l;
        l = lnext;
    }
    if (n == 0) {
        l_n = 1.0;
        l_n1 = 1.0 - z;
        return;
    }
    l_n = l;
    l_n1 = ((2.0 * n + 1.0 - z) * l - n * lm) / (n + 1.0);
}

} // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("ln_gamma: requires x > 0");
    }
    return std::lgamma(x);
}

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("bessel_k: requires x > 0");
    }
    nu = std::abs(nu);  // K is even in the order

    const int n = static_cast<int>(nu + 0.5);
    const double mu = nu - n;  // |mu| <= 1/2

    double k_mu, k_mu1;
    if (x <= 2.0) {
        bessel_k_temme(mu, x, k_mu, k_mu1);
    } else {
        bessel_k_cf2(mu, x, k_mu, k_mu1);
    }
    if (n == 0) {
        return k_mu;
    }
    // K_{v+1} = (2v/x) K_v + K_{v-1}: stable upward in the order.
    double km = k_mu;
    double k = k_mu1;
    for (int j = 1; j < n; ++j) {
        const double knext = km + (2.0 * (mu + j) / x) * k;
        km = k;
        k = knext;
    }
    return k;
}

QuadratureRule gauss_laguerre(int order) {
    if (order < 1 || order > 64) {
        throw std::invalid_argument("gauss_laguerre: order must be in [1, 64]");
    }

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    const int n = order;
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        // Stroud-Secrest initial guesses, then Newton on L_n.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }

        double l_n = 0.0, l_n1 = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            laguerre_pair(n, z, l_n, l_n1);
            // L_n'(z) = n (L_n(z) - L_{n-1}(z)) / z, with L_{n-1} recovered
            // from the recurrence used to form L_{n+1}.
            const double l_nm1 = ((2.0 * n + 1.0 - z) * l_n - (n + 1.0) * l_n1) / n;
            const double deriv = n * (l_n - l_nm1) / z;
            const double dz = l_n / deriv;
            z -= dz;
            if (std::abs(dz) <= 1e-14 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw convergence_error("gauss_laguerre: Newton iteration stalled", z, 0.0);
        }
        laguerre_pair(n, z, l_n, l_n1);
        rule.nodes[i] = z;
        rule.weights[i] = z / ((n + 1.0) * (n + 1.0) * l_n1 * l_n1);
    }
    return rule;
}

namespace {

// Core power-series summation of the multivariate confluent series, grouped
// by total degree so the (b)_s denominator is shared and the summation
// order is deterministic. No sign restriction on the arguments.
double phi2_sum_by_degree(std::span<const double> a, double b, std::span<const double> x,
                          double tol) {
    constexpr int kPerDimCap = 120;

    // Per-dimension term arrays c_k[m] = (a_k)_m x_k^m / m!. Dimensions with
    // a_k = 0 or x_k = 0 only contribute m = 0 and drop out.
    double max_abs_x = 0.0;
    std::vector<std::vector<long double>> dim_terms;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0 || x[k] == 0.0) {
            continue;
        }
        max_abs_x = std::max(max_abs_x, std::abs(x[k]));
        std::vector<long double> c(kPerDimCap + 1);
        c[0] = 1.0L;
        for (int m = 1; m <= kPerDimCap; ++m) {
            c[m] = c[m - 1] * (static_cast<long double>(a[k]) + (m - 1)) *
                   static_cast<long double>(x[k]) / m;
        }
        dim_terms.push_back(std::move(c));
    }
    if (dim_terms.empty()) {
        return 1.0;  // all series collapse to the leading term
    }

    std::vector<long double> degree = dim_terms.front();
    for (std::size_t k = 1; k < dim_terms.size(); ++k) {
        const auto& c = dim_terms[k];
        std::vector<long double> next(degree.size() + c.size() - 1, 0.0L);
        for (std::size_t i = 0; i < degree.size(); ++i) {
            if (degree[i] == 0.0L) continue;
            for (std::size_t j = 0; j < c.size(); ++j) {
                next[i + j] += degree[i] * c[j];
            }
        }
        degree = std::move(next);
    }

    const int stop_floor = static_cast<int>(std::ceil(2.0 * max_abs_x)) + 12;
    long double sum = 0.0L;
    long double pochhammer_b = 1.0L;  // (b)_s
    long double prev_term = std::numeric_limits<long double>::infinity();
    for (std::size_t s = 0; s < degree.size(); ++s) {
        const long double term = degree[s] / pochhammer_b;
        sum += term;
        const long double mag = std::abs(term);
        if (static_cast<int>(s) >= stop_floor && mag + prev_term < tol / 4.0) {
            return static_cast<double>(sum);
        }
        prev_term = mag;
        pochhammer_b *= static_cast<long double>(b) + s;
        if (pochhammer_b > 1e300L && static_cast<int>(s) >= stop_floor) {
            // remaining terms are below any representable contribution
            return static_cast<double>(sum);
        }
    }
    throw convergence_error("phi2_series: term budget exhausted before the tail bound",
                            static_cast<double>(sum), static_cast<double>(prev_term));
}

} // namespace

double phi2_series(std::span<const double> a, double b, std::span<const double> x,
                   double tol) {
    const std::size_t dims = a.size();
    if (dims < 1 || dims > 4) {
        throw std::invalid_argument("phi2_series: K must be in [1, 4]");
    }
    if (x.size() != dims) {
        throw std::invalid_argument("phi2_series: a and x must have equal length");
    }
    if (!(b > 0.0)) {
        throw std::domain_error("phi2_series: requires b > 0");
    }
    double a_total = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
        if (x[k] > 0.0) {
            throw std::domain_error("phi2_series: series regime needs x_k <= 0");
        }
        if (a[k] < 0.0) {
            throw std::domain_error("phi2_series: requires a_k >= 0");
        }
        a_total += a[k];
    }

    // Most negative argument among the dimensions that actually contribute.
    std::size_t pivot = dims;
    for (std::size_t k = 0; k < dims; ++k) {
        if (a[k] == 0.0 || x[k] == 0.0) {
            continue;
        }
        if (pivot == dims || x[k] < x[pivot]) {
            pivot = k;
        }
    }
    if (pivot == dims) {
        return 1.0;
    }

    // Direct summation alternates in sign and loses ~e^{|x|} of precision,
    // so for b > sum(a) the series is mapped to non-negative arguments by
    // the confluent Kummer transformation
    //   Phi2(a; b; x) = e^{x_p} Phi2({a_k != p}, b - sum(a); b;
    //                                {x_k - x_p}, -x_p),
    // under which every term is positive and the summation is stable at any
    // admissible |x|.
    if (b - a_total > 0.0) {
        std::vector<double> ta, tx;
        ta.reserve(dims);
        tx.reserve(dims);
        for (std::size_t k = 0; k < dims; ++k) {
            if (k == pivot) {
                continue;
            }
            ta.push_back(a[k]);
            tx.push_back(x[k] - x[pivot]);
        }
        ta.push_back(b - a_total);
        tx.push_back(-x[pivot]);
        return std::exp(x[pivot]) * phi2_sum_by_degree(ta, b, tx, tol);
    }
    return phi2_sum_by_degree(a, b, x, tol);
}

double inverse_laplace_cdf(const LaplaceTransformHandle& transform, double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("inverse_laplace_cdf: requires z > 0");
    }
    if (!transform.eval) {
        throw std::invalid_argument("inverse_laplace_cdf: empty transform");
    }

    // Euler-accelerated Bromwich summation (Abate-Whitt-Choudhury style):
    // fixed contour decay A, kBaseTerms regular terms, binomial averaging of
    // the next kEulerDepth partial sums. Discretization error ~ e^{-A} for a
    // transform of a function bounded by 1.
    constexpr double kContourDecay = 23.0;
    constexpr int kBaseTerms = 32;
    constexpr int kEulerDepth = 12;

    const double contour_re = kContourDecay / (2.0 * z);
    if (contour_re <= transform.convergence_abscissa) {
        throw std::domain_error("inverse_laplace_cdf: contour left of the convergence abscissa");
    }

    const double scale = std::exp(0.5 * kContourDecay) / z;
    using cd = std::complex<double>;

    double running = 0.5 * transform.eval(cd(contour_re, 0.0)).real();
    double partial[kEulerDepth + 1];
    double sign = -1.0;
    for (int k = 1; k <= kBaseTerms + kEulerDepth; ++k) {
        const double im = k * kPi / z;
        running += sign * transform.eval(cd(contour_re, im)).real();
        sign = -sign;
        if (k >= kBaseTerms) {
            partial[k - kBaseTerms] = running;
        }
    }

    // Binomially averaged tails at depth and depth-1; their spread is the
    // convergence estimate.
    const auto euler_average = [&partial](int depth) {
        double acc = 0.0;
        double binom = 1.0;  // C(depth, 0)
        for (int j = 0; j <= depth; ++j) {
            acc += binom * partial[j];
            binom = binom * (depth - j) / (j + 1.0);
        }
        return acc * std::pow(0.5, depth);
    };
    const double euler = euler_average(kEulerDepth);
    const double euler_prev = euler_average(kEulerDepth - 1);

    const double value = scale * euler;
    const double value_prev = scale * euler_prev;
    const double accel_spread = std::abs(value - value_prev);
    const double bound = accel_spread + std::exp(-kContourDecay);
    if (!(std::isfinite(value)) || bound > 1e-6) {
        throw convergence_error("inverse_laplace_cdf: acceleration sequence did not settle",
                                value, bound);
    }
    constexpr double kNegativeTol = 1e-6;
    if (value < -kNegativeTol || value > 1.0 + kNegativeTol) {
        throw instability_error("inverse_laplace_cdf: inverted value left [0,1] beyond tolerance");
    }
    return std::clamp(value, 0.0, 1.0);
}

} // namespace aeris::specfun

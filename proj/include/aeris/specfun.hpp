#ifndef AERIS_SPECFUN_HPP
#define AERIS_SPECFUN_HPP

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace aeris::specfun {

// Gauss-Laguerre rule for the weight e^{-x} on [0, inf): nodes are the roots
// of the order-K Laguerre polynomial (ascending, all positive), weights sum
// to 1 and integrate x^j exactly for j <= 2K-1.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// A one-sided Laplace transform H(v), Re v > convergence_abscissa, together
// with the largest abscissa of convergence the caller knows about. For the
// CDF-type transforms used here, H(v) -> 0 as Re v -> inf.
struct LaplaceTransformHandle {
    std::function<std::complex<double>(std::complex<double>)> eval;
    double convergence_abscissa = 0.0;
};

// ln Gamma(x) for x > 0.
double ln_gamma(double x);

// Modified Bessel function of the second kind K_nu(x), x > 0. Even in nu;
// accurate to ~1e-13 relative over nu in [0, 20], x in [1e-6, 50].
double bessel_k(double nu, double x);

// Gauss-Laguerre rule of the given order, 1 <= order <= 64.
QuadratureRule gauss_laguerre(int order);

// Confluent hypergeometric function of several variables,
//   Phi2(a_1..a_K; b; x_1..x_K) = sum over multi-indices m of
//     prod_k (a_k)_{m_k} x_k^{m_k} / m_k!  /  (b)_{|m|},
// evaluated by power-series summation grouped by total degree. Series
// regime: K <= 4, b > 0, x_k <= 0, |x_k| <= 30. Truncation error <= tol
// (default 1e-10); throws convergence_error past the term budget.
double phi2_series(std::span<const double> a, double b, std::span<const double> x,
                   double tol = 1e-10);

// Evaluates F(z) from its transform H(v) = (1/v) L{pdf}(v) for a
// distribution on [0, inf), via fixed-node Euler-accelerated Bromwich
// summation (32 regular terms, acceleration depth 12). Result clamped to
// [0, 1] after the convergence check; absolute accuracy ~1e-7 or better.
double inverse_laplace_cdf(const LaplaceTransformHandle& transform, double z);

} // namespace aeris::specfun

#endif

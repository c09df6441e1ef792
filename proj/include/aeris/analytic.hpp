#ifndef AERIS_ANALYTIC_HPP
#define AERIS_ANALYTIC_HPP

#include "aeris/matching.hpp"
#include "aeris/mgfit.hpp"

namespace aeris::analytic {

// Full link scenario. avg_snr_db is the average transmit SNR in dB;
// target_se the target spectral efficiency R_th in b/s/Hz, so the SNR
// threshold is 2^{R_th} - 1.
struct SystemConfig {
    int n_elements;
    double kappa;       // amplitude reflection coefficient, (0, 1]
    double avg_snr_db;  // gamma-bar
    double target_se;   // R_th
    matching::HopPairParams hop_params;
    int quadrature_order = 30;

    void validate() const;
    double snr_threshold() const;  // 2^{R_th} - 1
    double avg_snr_linear() const;
};

// CDF of Z = sum of n i.i.d. mixture-Gamma variables, by numerical
// inversion of (1/v) L(v)^n. Production path; any n.
double cdf_sum(const mgfit::MixtureGamma& mg, int n, double z);

// Same CDF through the multinomial expansion into Phi2 terms. Enumeration
// guard: n <= 4 and mg.order() <= 3. Small-instance verification path.
double cdf_sum_multinomial(const mgfit::MixtureGamma& mg, int n, double z);

// Number of weak compositions of n into k parts, C(n+k-1, k-1): the term
// count cdf_sum_multinomial enumerates.
std::size_t weak_composition_count(int n, int k);

// CDF of |Z|^2, i.e. cdf_sum evaluated at sqrt(x).
double cdf_z_squared(const mgfit::MixtureGamma& mg, int n, double x);

// Closed-form outage probability of the configured link:
// P_out = F_{|Z|^2}(gamma_th / (gamma_bar kappa^2)).
double outage_probability(const SystemConfig& config);

// The mixture underlying outage_probability, exposed so sweeps can build
// it once per fading configuration.
mgfit::MixtureGamma build_cascade_mixture(const matching::HopPairParams& hop_params,
                                          int quadrature_order);

} // namespace aeris::analytic

#endif

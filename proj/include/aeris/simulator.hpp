#ifndef AERIS_SIMULATOR_HPP
#define AERIS_SIMULATOR_HPP

#include "aeris/analytic.hpp"
#include "aeris/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace aeris::simulator {

struct TrialBudget {
    std::uint64_t trials;
    std::uint64_t seed;
};

// Conventional dual-hop baselines: N relays with MRC reception and MRT
// forwarding over the same composite per-channel fading as the RIS links.
enum class RelayScheme { HD_DF, HD_VG_AF, FD_AF, FD_DF };

struct OpEstimate {
    double op;
    double std_error;
};

// Coherent magnitude sum of one channel realization,
// sum_r L_Sr G_Sr G_rD L_rD, drawing the quadruples in the documented
// order (G_Sr, L_Sr, G_rD, L_rD) per element.
double coherent_sum(const matching::HopPairParams& hop_params, int n_elements,
                    RngHandle& rng);

// SNR under the optimal phase configuration for a given magnitude sum:
// gamma_bar kappa^2 sum^2.
double snr_from_coherent_sum(const analytic::SystemConfig& config, double sum);

// One Monte-Carlo trial of the optimally phased end-to-end SNR.
double simulate_ris_snr(const analytic::SystemConfig& config, RngHandle& rng);

// OP estimate over the trial budget; deterministic given the seed and
// independent of worker count.
OpEstimate estimate_op(const analytic::SystemConfig& config, const TrialBudget& budget);

OpEstimate estimate_op_relay(RelayScheme scheme, const analytic::SystemConfig& config,
                             const TrialBudget& budget);

// Sweep helpers: one set of channel draws evaluates the whole gamma-bar
// grid, so curves are cheap and the per-point estimates share a seed.
std::vector<OpEstimate> estimate_op_curve(const analytic::SystemConfig& config,
                                          std::span<const double> gamma_db_grid,
                                          const TrialBudget& budget);

std::vector<OpEstimate> estimate_op_relay_curve(RelayScheme scheme,
                                                const analytic::SystemConfig& config,
                                                std::span<const double> gamma_db_grid,
                                                const TrialBudget& budget);

} // namespace aeris::simulator

#endif

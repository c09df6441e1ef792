#include "aeris/simulator.hpp"
#include "aeris/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aeris::simulator {

namespace {

constexpr std::uint64_t kBlockTrials = 1 << 16;

// Everything a trial produces: the coherent RIS sum and the two MRC/MRT
// branch gains of the relay baselines, from one shared set of channel
// draws so that all estimators with the same seed see the same channels.
struct TrialStats {
    double ris_sum;
    double hop_gain_s;  // sum_r (L_Sr G_Sr)^2
    double hop_gain_d;  // sum_r (L_rD G_rD)^2
};

TrialStats draw_trial(const matching::HopPairParams& hop, int n_elements, RngHandle& rng) {
    TrialStats stats{0.0, 0.0, 0.0};
    for (int r = 0; r < n_elements; ++r) {
        const double g_s = sample_nakagami(hop.nakagami_s, rng);
        const double l_s = sample_inverse_gamma(hop.ig_s, rng);
        const double g_d = sample_nakagami(hop.nakagami_d, rng);
        const double l_d = sample_inverse_gamma(hop.ig_d, rng);
        const double leg_s = l_s * g_s;
        const double leg_d = l_d * g_d;
        stats.ris_sum += leg_s * leg_d;
        stats.hop_gain_s += leg_s * leg_s;
        stats.hop_gain_d += leg_d * leg_d;
    }
    return stats;
}

std::uint64_t block_count(std::uint64_t trials) {
    return (trials + kBlockTrials - 1) / kBlockTrials;
}

std::uint64_t block_size(std::uint64_t block, std::uint64_t trials) {
    const std::uint64_t begin = block * kBlockTrials;
    return std::min<std::uint64_t>(kBlockTrials, trials - begin);
}

// Spectral-efficiency prelog: half-duplex schemes burn two channel uses.
double scheme_snr_threshold(RelayScheme scheme, double target_se) {
    const bool half_duplex = scheme == RelayScheme::HD_DF || scheme == RelayScheme::HD_VG_AF;
    return std::exp2((half_duplex ? 2.0 : 1.0) * target_se) - 1.0;
}

double scheme_e2e_snr(RelayScheme scheme, double gamma1, double gamma2) {
    switch (scheme) {
        case RelayScheme::HD_DF:
        case RelayScheme::FD_DF:
            return std::min(gamma1, gamma2);
        case RelayScheme::HD_VG_AF:
        case RelayScheme::FD_AF:
            return gamma1 * gamma2 / (gamma1 + gamma2 + 1.0);
    }
    return 0.0;
}

OpEstimate estimate_from_count(std::uint64_t outages, std::uint64_t trials) {
    const double p = static_cast<double>(outages) / static_cast<double>(trials);
    return OpEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

} // namespace

double coherent_sum(const matching::HopPairParams& hop_params, int n_elements,
                    RngHandle& rng) {
    if (n_elements < 1) {
        throw std::invalid_argument("coherent_sum: requires n_elements >= 1");
    }
    return draw_trial(hop_params, n_elements, rng).ris_sum;
}

double snr_from_coherent_sum(const analytic::SystemConfig& config, double sum) {
    return config.avg_snr_linear() * config.kappa * config.kappa * sum * sum;
}

double simulate_ris_snr(const analytic::SystemConfig& config, RngHandle& rng) {
    config.validate();
    return snr_from_coherent_sum(
        config, draw_trial(config.hop_params, config.n_elements, rng).ris_sum);
}

OpEstimate estimate_op(const analytic::SystemConfig& config, const TrialBudget& budget) {
    config.validate();
    if (budget.trials < 1) {
        throw std::invalid_argument("estimate_op: requires trials >= 1");
    }
    const double sum_threshold = std::sqrt(
        config.snr_threshold() /
        (config.avg_snr_linear() * config.kappa * config.kappa));

    const std::uint64_t blocks = block_count(budget.trials);
    std::vector<std::uint64_t> outages(blocks, 0);
    const RngHandle base(budget.seed);
    parallel_for_blocks(blocks, [&](std::size_t b) {
        RngHandle rng = base.derive(b);
        const std::uint64_t count = block_size(b, budget.trials);
        std::uint64_t local = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            const TrialStats stats = draw_trial(config.hop_params, config.n_elements, rng);
            if (stats.ris_sum < sum_threshold) {
                ++local;
            }
        }
        outages[b] = local;
    });

    std::uint64_t total = 0;
    for (const std::uint64_t c : outages) {
        total += c;
    }
    return estimate_from_count(total, budget.trials);
}

OpEstimate estimate_op_relay(RelayScheme scheme, const analytic::SystemConfig& config,
                             const TrialBudget& budget) {
    config.validate();
    if (budget.trials < 1) {
        throw std::invalid_argument("estimate_op_relay: requires trials >= 1");
    }
    const double gamma_bar = config.avg_snr_linear();
    const double threshold = scheme_snr_threshold(scheme, config.target_se);

    const std::uint64_t blocks = block_count(budget.trials);
    std::vector<std::uint64_t> outages(blocks, 0);
    const RngHandle base(budget.seed);
    parallel_for_blocks(blocks, [&](std::size_t b) {
        RngHandle rng = base.derive(b);
        const std::uint64_t count = block_size(b, budget.trials);
        std::uint64_t local = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            const TrialStats stats = draw_trial(config.hop_params, config.n_elements, rng);
            const double snr = scheme_e2e_snr(scheme, gamma_bar * stats.hop_gain_s,
                                              gamma_bar * stats.hop_gain_d);
            if (snr < threshold) {
                ++local;
            }
        }
        outages[b] = local;
    });

    std::uint64_t total = 0;
    for (const std::uint64_t c : outages) {
        total += c;
    }
    return estimate_from_count(total, budget.trials);
}

std::vector<OpEstimate> estimate_op_curve(const analytic::SystemConfig& config,
                                          std::span<const double> gamma_db_grid,
                                          const TrialBudget& budget) {
    config.validate();
    if (budget.trials < 1) {
        throw std::invalid_argument("estimate_op_curve: requires trials >= 1");
    }

    const std::uint64_t blocks = block_count(budget.trials);
    std::vector<double> sums(budget.trials);
    const RngHandle base(budget.seed);
    parallel_for_blocks(blocks, [&](std::size_t b) {
        RngHandle rng = base.derive(b);
        const std::uint64_t begin = b * kBlockTrials;
        const std::uint64_t count = block_size(b, budget.trials);
        for (std::uint64_t t = 0; t < count; ++t) {
            sums[begin + t] = draw_trial(config.hop_params, config.n_elements, rng).ris_sum;
        }
    });
    std::sort(sums.begin(), sums.end());

    const double gamma_th = config.snr_threshold();
    std::vector<OpEstimate> curve;
    curve.reserve(gamma_db_grid.size());
    for (const double gamma_db : gamma_db_grid) {
        const double gamma_bar = std::pow(10.0, gamma_db / 10.0);
        const double sum_threshold =
            std::sqrt(gamma_th / (gamma_bar * config.kappa * config.kappa));
        const auto below = std::lower_bound(sums.begin(), sums.end(), sum_threshold);
        curve.push_back(estimate_from_count(
            static_cast<std::uint64_t>(below - sums.begin()), budget.trials));
    }
    return curve;
}

std::vector<OpEstimate> estimate_op_relay_curve(RelayScheme scheme,
                                                const analytic::SystemConfig& config,
                                                std::span<const double> gamma_db_grid,
                                                const TrialBudget& budget) {
    config.validate();
    if (budget.trials < 1) {
        throw std::invalid_argument("estimate_op_relay_curve: requires trials >= 1");
    }

    const std::uint64_t blocks = block_count(budget.trials);
    std::vector<double> gain_s(budget.trials), gain_d(budget.trials);
    const RngHandle base(budget.seed);
    parallel_for_blocks(blocks, [&](std::size_t b) {
        RngHandle rng = base.derive(b);
        const std::uint64_t begin = b * kBlockTrials;
        const std::uint64_t count = block_size(b, budget.trials);
        for (std::uint64_t t = 0; t < count; ++t) {
            const TrialStats stats = draw_trial(config.hop_params, config.n_elements, rng);
            gain_s[begin + t] = stats.hop_gain_s;
            gain_d[begin + t] = stats.hop_gain_d;
        }
    });

    const double threshold = scheme_snr_threshold(scheme, config.target_se);
    std::vector<OpEstimate> curve;
    curve.reserve(gamma_db_grid.size());
    for (const double gamma_db : gamma_db_grid) {
        const double gamma_bar = std::pow(10.0, gamma_db / 10.0);
        std::uint64_t outages = 0;
        for (std::uint64_t t = 0; t < budget.trials; ++t) {
            const double snr =
                scheme_e2e_snr(scheme, gamma_bar * gain_s[t], gamma_bar * gain_d[t]);
            if (snr < threshold) {
                ++outages;
            }
        }
        curve.push_back(estimate_from_count(outages, budget.trials));
    }
    return curve;
}

} // namespace aeris::simulator

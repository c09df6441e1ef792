// Acceptance suite: runs the project's ten verification criteria end to
// end and prints one PASS/FAIL line per criterion. Exit code is the number
// of failed criteria.
//
// Usage: acceptance [criterion numbers...] [--full-corpus path.csv]
//   with no numbers, all criteria run. --full-corpus additionally reports
//   the full-scale training target (reported, never gating).

#include "aeris/analytic.hpp"
#include "aeris/dataset.hpp"
#include "aeris/matching.hpp"
#include "aeris/mgfit.hpp"
#include "aeris/mlp.hpp"
#include "aeris/rng.hpp"
#include "aeris/simulator.hpp"
#include "support/numeric.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

using namespace aeris;
using matching::GammaFit;
using matching::HopPairParams;
using simulator::OpEstimate;
using simulator::TrialBudget;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

HopPairParams random_params(RngHandle& rng) {
    return HopPairParams{NakagamiParams(0.6 + 2.4 * rng.uniform(), 0.2 + 3.0 * rng.uniform()),
                         NakagamiParams(0.6 + 2.4 * rng.uniform(), 0.2 + 3.0 * rng.uniform()),
                         InverseGammaParams(1.3 + 2.2 * rng.uniform(), 0.3 + 2.0 * rng.uniform()),
                         InverseGammaParams(1.3 + 2.2 * rng.uniform(), 0.3 + 2.0 * rng.uniform())};
}

HopPairParams symmetric_params(double m, double alpha, double beta = 1.0) {
    const double omega = std::pow(std::sqrt(0.5), -2.7);
    return HopPairParams{NakagamiParams(m, omega), NakagamiParams(m, omega),
                         InverseGammaParams(alpha, beta), InverseGammaParams(alpha, beta)};
}

analytic::SystemConfig make_config(int n, double gamma_db, double rth, double m, double alpha) {
    return analytic::SystemConfig{n, 1.0, gamma_db, rth, symmetric_params(m, alpha), 30};
}

std::vector<double> db_grid() {
    std::vector<double> grid;
    for (double g = -10.0; g <= 20.0001; g += 1.0) {
        grid.push_back(g);
    }
    return grid;
}

// ---------------------------------------------------------------------- 1

Verdict criterion1() {
    RngHandle rng(101);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const HopPairParams p = random_params(rng);
        const GammaFit g = matching::fit_g_to_gamma(p);
        worst = std::max(worst, rel_err(g.shape * g.scale, matching::moment_g_product(p, 1)));
        worst = std::max(worst, rel_err(g.shape * (1.0 + g.shape) * g.scale * g.scale,
                                        matching::moment_g_product(p, 2)));
        const GammaFit l = matching::fit_l_tilde_to_gamma(p);
        worst = std::max(worst, rel_err(l.shape * l.scale, matching::moment_l_tilde(p, 1)));
        worst = std::max(worst, rel_err(l.shape * (1.0 + l.shape) * l.scale * l.scale,
                                        matching::moment_l_tilde(p, 2)));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst moment mismatch %.3e (tolerance 1e-12)", worst);
    return {worst <= 1e-12, buf};
}

// ---------------------------------------------------------------------- 2

Verdict criterion2() {
    RngHandle rng(202);
    double worst = 0.0;
    for (int set = 0; set < 20; ++set) {
        const HopPairParams p = random_params(rng);
        const double mean_g = matching::moment_g_product(p, 1);
        const double mean_l = matching::moment_l_tilde(p, 1);
        for (int n = 1; n <= 4; ++n) {
            const double qg = testsupport::integrate_density(
                [&, n](double z) {
                    return z > 0 ? std::pow(z, n) * matching::exact_pdf_g_product(p, z) : 0.0;
                },
                mean_g * (1.0 + 0.5 * n), 1e-11);
            worst = std::max(worst, rel_err(qg, matching::moment_g_product(p, n)));
            const double ql = testsupport::integrate_density(
                [&, n](double z) {
                    return z > 0 ? std::pow(z, n) * matching::exact_pdf_l_tilde(p, z) : 0.0;
                },
                mean_l * (1.0 + 0.4 * n), 1e-11);
            worst = std::max(worst, rel_err(ql, matching::moment_l_tilde(p, n)));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst quadrature/closed-form mismatch %.3e (tolerance 1e-6)",
                  worst);
    return {worst <= 1e-6, buf};
}

// ---------------------------------------------------------------------- 3

Verdict criterion3() {
    RngHandle rng(303);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const HopPairParams p = random_params(rng);
        const GammaFit fit_g = matching::fit_g_to_gamma(p);
        const GammaFit fit_l = matching::fit_l_tilde_to_gamma(p);
        for (const int order : {10, 30}) {
            const auto mg =
                mgfit::build_mixture(fit_g, fit_l, specfun::gauss_laguerre(order));
            double mean = 0.0;
            for (const auto& comp : mg.components) {
                mean += std::exp(std::log(comp.weight) + mg.shape * std::log(comp.scale)) *
                        mg.shape * comp.scale;
            }
            const double total = testsupport::integrate_density(
                [&](double y) { return y > 0 ? mgfit::mixture_pdf(mg, y) : 0.0; }, mean, 1e-10);
            worst = std::max(worst, std::abs(total - 1.0));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |integral - 1| = %.3e (tolerance 1e-8)", worst);
    return {worst <= 1e-8, buf};
}

// ---------------------------------------------------------------------- 4

Verdict criterion4() {
    const HopPairParams p = symmetric_params(2.0, 2.5);
    double worst = 0.0;
    for (int order = 1; order <= 3; ++order) {
        const auto mg = analytic::build_cascade_mixture(p, order);
        double zeta_min = mg.components.front().scale;
        for (const auto& c : mg.components) {
            zeta_min = std::min(zeta_min, c.scale);
        }
        for (int n = 1; n <= 3; ++n) {
            const double z_cap = std::min(30.0 * zeta_min, 3.0 * n);
            for (int j = 1; j <= 20; ++j) {
                const double z = z_cap * j / 20.0;
                const double diff = std::abs(analytic::cdf_sum(mg, n, z) -
                                             analytic::cdf_sum_multinomial(mg, n, z));
                worst = std::max(worst, diff);
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |inversion - expansion| = %.3e (tolerance 1e-6)",
                  worst);
    return {worst <= 1e-6, buf};
}

// ---------------------------------------------------------------------- 5

Verdict criterion5() {
    const auto grid = db_grid();
    double worst_rel = 0.0;
    int checked = 0;
    std::uint64_t seed = 505;
    for (const double m : {1.5, 2.0, 2.5}) {
        for (const double alpha : {2.0, 2.5, 3.0}) {
            const auto config = make_config(20, 0.0, 5.0, m, alpha);
            const auto mg = analytic::build_cascade_mixture(config.hop_params, 30);
            const auto curve =
                simulator::estimate_op_curve(config, grid, TrialBudget{1000000, seed++});
            const double gamma_th = config.snr_threshold();
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (curve[i].op < 1e-3) {
                    continue;
                }
                const double gamma_lin = std::pow(10.0, grid[i] / 10.0);
                const double closed_form =
                    analytic::cdf_z_squared(mg, 20, gamma_th / gamma_lin);
                worst_rel = std::max(worst_rel, std::abs(closed_form - curve[i].op) / curve[i].op);
                ++checked;
            }
        }
    }

    // fading-order claim: strong line-of-sight with weak shadowing beats
    // weak line-of-sight with strong shadowing everywhere on the grid
    bool ordered = true;
    const auto mg_good = analytic::build_cascade_mixture(symmetric_params(2.5, 2.0), 30);
    const auto mg_bad = analytic::build_cascade_mixture(symmetric_params(1.5, 3.0), 30);
    const double gamma_th = make_config(20, 0.0, 5.0, 2.0, 2.5).snr_threshold();
    for (const double gamma_db : grid) {
        const double gamma_lin = std::pow(10.0, gamma_db / 10.0);
        const double good = analytic::cdf_z_squared(mg_good, 20, gamma_th / gamma_lin);
        const double bad = analytic::cdf_z_squared(mg_bad, 20, gamma_th / gamma_lin);
        ordered = ordered && (good < bad || (good < 1e-12 && bad < 1e-12));
    }

    const bool pass = worst_rel <= 0.10 && checked > 0 && ordered;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "worst analytic/MC deviation %.2f%% over %d grid points with OP >= 1e-3 "
                  "(tolerance 10%%); fading order %s",
                  100.0 * worst_rel, checked, ordered ? "holds" : "violated");
    return {pass, buf};
}

// ---------------------------------------------------------------------- 6

double crossing_db(const std::vector<double>& grid, const std::vector<OpEstimate>& curve,
                   double target) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (curve[i - 1].op >= target && curve[i].op < target && curve[i].op > 0.0) {
            const double l0 = std::log10(curve[i - 1].op);
            const double l1 = std::log10(curve[i].op);
            return grid[i - 1] + (grid[i] - grid[i - 1]) * (std::log10(target) - l0) / (l1 - l0);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

Verdict criterion6() {
    const auto grid = db_grid();
    const auto c15 = make_config(15, 0.0, 5.0, 1.5, 3.0);
    const auto c30 = make_config(30, 0.0, 5.0, 1.5, 3.0);
    const auto curve15 = simulator::estimate_op_curve(c15, grid, TrialBudget{1000000, 606});
    const auto curve30 = simulator::estimate_op_curve(c30, grid, TrialBudget{1000000, 607});
    const double at15 = crossing_db(grid, curve15, 1e-2);
    const double at30 = crossing_db(grid, curve30, 1e-2);
    const double drop = at15 - at30;
    const bool pass = std::isfinite(drop) && std::abs(drop - 8.2) <= 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "required SNR at OP=1e-2: %.2f dB (N=15) vs %.2f dB (N=30), drop %.2f dB "
                  "(target 8.2 +- 1.0)",
                  at15, at30, drop);
    return {pass, buf};
}

// ---------------------------------------------------------------------- 7

Verdict criterion7() {
    const auto grid = db_grid();
    const auto config = make_config(15, 0.0, 1.0, 1.5, 3.0);
    const TrialBudget budget{1000000, 707};
    const auto ris = simulator::estimate_op_curve(config, grid, budget);
    const std::vector<std::pair<const char*, simulator::RelayScheme>> schemes{
        {"HD-DF", simulator::RelayScheme::HD_DF},
        {"HD-VG-AF", simulator::RelayScheme::HD_VG_AF},
        {"FD-AF", simulator::RelayScheme::FD_AF},
        {"FD-DF", simulator::RelayScheme::FD_DF}};

    // pairwise reading: a comparison is resolvable when either side is at
    // or above 1e-4 at the shared trial budget; there the RIS curve must
    // sit strictly below the baseline
    int compared = 0;
    std::string violation;
    for (const auto& [name, scheme] : schemes) {
        const auto baseline = simulator::estimate_op_relay_curve(scheme, config, grid, budget);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::max(ris[i].op, baseline[i].op) < 1e-4) {
                continue;
            }
            ++compared;
            if (!(ris[i].op < baseline[i].op)) {
                violation = std::string(name) + " at " + std::to_string(grid[i]) + " dB (ris " +
                            std::to_string(ris[i].op) + " vs " + std::to_string(baseline[i].op) +
                            ")";
            }
        }
    }
    if (!violation.empty()) {
        return {false, "dominance violated against " + violation};
    }
    return {true, "aerial link strictly below all four baselines on " +
                      std::to_string(compared) + " resolvable comparisons"};
}

// ---------------------------------------------------------------------- 8

Verdict criterion8(const std::string& full_corpus) {
    const auto corpus_path = std::filesystem::temp_directory_path() / "aeris_acceptance_corpus.csv";
    std::vector<dataset::DatasetRow> rows;
    if (std::filesystem::exists(corpus_path)) {
        rows = dataset::read_rows(corpus_path);
    }
    if (rows.size() != 10000) {
        rows = dataset::generate_dataset(10000, dataset::FeatureRanges{},
                                         TrialBudget{10000, 0}, 20250810);
        dataset::write_rows(corpus_path, rows);
    }
    const auto split = dataset::split_dataset(rows, 7);

    mlp::MlpArchitecture arch;  // the procedure's setting: 5 x 128, ReLU
    mlp::TrainingConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.max_epochs = 250;
    cfg.batch_size = 256;
    cfg.rmse_threshold = 2e-2;
    cfg.seed = 808;
    const auto result = mlp::train_with_retries(arch, split, cfg);
    const double test_rmse = mlp::evaluate_rmse(result.network, split.test);

    // decreasing validation trend: the late-phase minimum must improve on
    // the early-phase minimum
    const auto& hist = result.history.epochs;
    const std::size_t quarter = std::max<std::size_t>(1, hist.size() / 4);
    double early = std::numeric_limits<double>::infinity();
    double late = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < hist.size(); ++e) {
        if (e < quarter) {
            early = std::min(early, hist[e].validation_mse);
        }
        if (e + quarter >= hist.size()) {
            late = std::min(late, hist[e].validation_mse);
        }
    }
    const bool decreasing = late < early;

    // prediction-surface sanity: mean predicted outage over the SNR sweep
    // must not grow with the transmit SNR
    bool surface_ok = true;
    {
        double prev_mean = std::numeric_limits<double>::infinity();
        for (double gamma_db = -10.0; gamma_db <= 20.0001; gamma_db += 2.0) {
            double mean = 0.0;
            int count = 0;
            for (const int n : {15, 20, 25, 30}) {
                dataset::FeatureVector f{gamma_db, static_cast<double>(n), 0.0, 0.0, 0.5,
                                         2.0,      2.0,  2.5, 2.5, 1.0, 1.0, 2.7, 5.0};
                mean += mlp::forward(result.network, f);
                ++count;
            }
            mean /= count;
            surface_ok = surface_ok && mean <= prev_mean + 1e-6;
            prev_mean = mean;
        }
    }
    const bool pass = test_rmse < 2e-2 && decreasing && surface_ok;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "desk corpus (1e4 rows, 1e4 trials/row): test RMSE %.4f (gate 0.0200), "
                  "validation MSE %.2e early-min -> %.2e late-min (%s), predicted surface %s "
                  "in SNR",
                  test_rmse, early, late, decreasing ? "decreasing" : "not decreasing",
                  surface_ok ? "non-increasing" : "NOT monotone");
    std::string detail(buf);

    if (!full_corpus.empty()) {
        const auto big = dataset::read_rows(full_corpus);
        const auto big_split = dataset::split_dataset(big, 7);
        mlp::TrainingConfig big_cfg = cfg;
        big_cfg.max_epochs = 60;
        big_cfg.rmse_threshold = 1e-9;  // run the full budget, report only
        const auto big_result = mlp::train(mlp::init_network(arch, 808), big_split, big_cfg);
        std::snprintf(buf, sizeof(buf),
                      "; full corpus (%zu rows): best validation MSE %.2e after %zu epochs "
                      "(soft target 1e-4, reported only)",
                      big.size(), big_result.history.best_validation_mse,
                      big_result.history.epochs.size());
        detail += buf;
    }
    return {pass, detail};
}

// ---------------------------------------------------------------------- 9

double min_preactivation(const mlp::MlpNetwork& net, const Eigen::MatrixXd& inputs) {
    double closest = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd a = inputs;
    for (std::size_t l = 0; l + 1 < net.weights.size(); ++l) {
        Eigen::MatrixXd z = (net.weights[l] * a).colwise() + net.biases[l];
        closest = std::min(closest, z.cwiseAbs().minCoeff());
        a = z.cwiseMax(0.0);
    }
    return closest;
}

Verdict criterion9() {
    RngHandle rng(909);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        mlp::MlpArchitecture arch;
        arch.input_dim = 3;
        arch.hidden_layers = 1 + static_cast<int>(rng.uniform() * 2.99);
        arch.hidden_width = 2 + static_cast<int>(rng.uniform() * 3.99);

        const int batch = 5;
        mlp::MlpNetwork net;
        Eigen::MatrixXd inputs(3, batch);
        Eigen::VectorXd labels(batch);
        for (int attempt = 0;; ++attempt) {
            net = mlp::init_network(arch, 9000 + 100 * trial + attempt);
            for (int c = 0; c < batch; ++c) {
                for (int r = 0; r < 3; ++r) {
                    inputs(r, c) = 2.0 * rng.uniform() - 1.0;
                }
                labels(c) = rng.uniform();
            }
            if (min_preactivation(net, inputs) > 1e-3 || attempt > 100) {
                break;
            }
        }

        mlp::Gradients grads, probe;
        mlp::batch_loss_and_gradient(net, inputs, labels, grads);
        const double h = 1e-5;
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            for (int r = 0; r < net.weights[l].rows(); ++r) {
                for (int c = 0; c < net.weights[l].cols(); ++c) {
                    const double saved = net.weights[l](r, c);
                    net.weights[l](r, c) = saved + h;
                    const double up = mlp::batch_loss_and_gradient(net, inputs, labels, probe);
                    net.weights[l](r, c) = saved - h;
                    const double down = mlp::batch_loss_and_gradient(net, inputs, labels, probe);
                    net.weights[l](r, c) = saved;
                    const double fd = (up - down) / (2.0 * h);
                    const double got = grads.weights[l](r, c);
                    const double scale = std::max({std::abs(fd), std::abs(got), 1e-3});
                    worst = std::max(worst, std::abs(got - fd) / scale);
                }
            }
            for (int r = 0; r < net.biases[l].size(); ++r) {
                const double saved = net.biases[l](r);
                net.biases[l](r) = saved + h;
                const double up = mlp::batch_loss_and_gradient(net, inputs, labels, probe);
                net.biases[l](r) = saved - h;
                const double down = mlp::batch_loss_and_gradient(net, inputs, labels, probe);
                net.biases[l](r) = saved;
                const double fd = (up - down) / (2.0 * h);
                const double got = grads.biases[l](r);
                const double scale = std::max({std::abs(fd), std::abs(got), 1e-3});
                worst = std::max(worst, std::abs(got - fd) / scale);
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst gradient deviation %.3e (tolerance 1e-6)", worst);
    return {worst <= 1e-6, buf};
}

// --------------------------------------------------------------------- 10

Verdict criterion10() {
    std::string failures;

    // sampling
    {
        RngHandle a(11), b(11);
        for (int i = 0; i < 1000; ++i) {
            if (sample_gamma(GammaParams(1.7, 0.9), a) != sample_gamma(GammaParams(1.7, 0.9), b)) {
                failures += "sampling; ";
                break;
            }
        }
    }
    // simulation
    {
        const auto config = make_config(10, 3.0, 5.0, 2.0, 2.5);
        const auto x = simulator::estimate_op(config, TrialBudget{200000, 10});
        const auto y = simulator::estimate_op(config, TrialBudget{200000, 10});
        if (x.op != y.op || x.std_error != y.std_error) {
            failures += "simulation; ";
        }
    }
    // dataset
    {
        const auto a = dataset::generate_dataset(16, dataset::FeatureRanges{},
                                                 TrialBudget{2000, 0}, 1212);
        const auto b = dataset::generate_dataset(16, dataset::FeatureRanges{},
                                                 TrialBudget{2000, 0}, 1212);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].features != b[i].features || a[i].label != b[i].label) {
                failures += "dataset; ";
                break;
            }
        }
    }
    // training
    {
        std::vector<dataset::DatasetRow> rows(200);
        RngHandle rng(13);
        for (auto& row : rows) {
            for (auto& f : row.features) {
                f = rng.uniform();
            }
            row.label = 0.25 + 0.5 * rng.uniform();
        }
        const auto split = dataset::split_dataset(rows, 3);
        mlp::MlpArchitecture arch;
        arch.hidden_layers = 2;
        arch.hidden_width = 8;
        mlp::TrainingConfig cfg;
        cfg.max_epochs = 10;
        cfg.batch_size = 32;
        cfg.rmse_threshold = 1e-9;
        const auto x = mlp::train(mlp::init_network(arch, 5), split, cfg);
        const auto y = mlp::train(mlp::init_network(arch, 5), split, cfg);
        for (std::size_t l = 0; l < x.network.weights.size(); ++l) {
            if (x.network.weights[l] != y.network.weights[l] ||
                x.network.biases[l] != y.network.biases[l]) {
                failures += "training; ";
                break;
            }
        }
    }

    if (failures.empty()) {
        return {true, "sampling, simulation, dataset, and training all replay bit-identically"};
    }
    return {false, "non-deterministic stages: " + failures};
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    std::string full_corpus;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full-corpus") == 0 && i + 1 < argc) {
            full_corpus = argv[++i];
        } else {
            selected.insert(std::atoi(argv[i]));
        }
    }

    struct Criterion {
        int number;
        const char* title;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> table{
        {1, "two-moment fits reproduce the exact product moments", criterion1},
        {2, "exact product PDFs agree with closed-form moments", criterion2},
        {3, "mixture density normalizes to one", criterion3},
        {4, "Laplace inversion matches the multinomial expansion", criterion4},
        {5, "analytic outage corroborated by Monte Carlo on the fading grid", criterion5},
        {6, "element sweep saves 8.2 dB at the 1e-2 outage level", criterion6},
        {7, "aerial link dominates the four relay baselines", criterion7},
        {8, "predictor reaches the training gates", [&] { return criterion8(full_corpus); }},
        {9, "backprop matches finite differences", criterion9},
        {10, "every seeded stage replays bit-identically", criterion10},
    };

    int failures = 0;
    for (const auto& c : table) {
        if (!selected.empty() && !selected.count(c.number)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        const Verdict verdict = c.run();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", verdict.pass ? "PASS" : "FAIL",
                    c.number, c.title, verdict.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!verdict.pass) {
            ++failures;
        }
    }

    std::printf("%d criteria failed\n", failures);
    return failures;
}

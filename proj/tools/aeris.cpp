// aeris - outage analysis toolkit for the aerial reflecting-surface link.
// Subcommands cover the full pipeline: closed-form outage curves, Monte
// Carlo simulation (with relay baselines), corpus generation, predictor
// training, and prediction sweeps. Every run writes a manifest with the
// resolved parameters next to its artifact.

#include "CLI11.hpp"
#include "json.hpp"

#include "aeris/analytic.hpp"
#include "aeris/dataset.hpp"
#include "aeris/errors.hpp"
#include "aeris/geometry.hpp"
#include "aeris/mlp.hpp"
#include "aeris/simulator.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr const char* kToolVersion = "aeris 1.0.0";

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

using nlohmann::json;

// ---------------------------------------------------------------- scenario

struct ScenarioFlags {
    int n_elements = 20;
    double kappa = 1.0;
    double target_se = 5.0;
    double m_both = 2.0;
    double alpha_both = 2.5;
    double beta_both = 1.0;
    double m_s = -1.0, m_d = -1.0;
    double alpha_s = -1.0, alpha_d = -1.0;
    double beta_s = -1.0, beta_d = -1.0;
    double eta = 2.7;
    int k_quad = 30;

    void resolve() {
        if (m_s < 0.0) m_s = m_both;
        if (m_d < 0.0) m_d = m_both;
        if (alpha_s < 0.0) alpha_s = alpha_both;
        if (alpha_d < 0.0) alpha_d = alpha_both;
        if (beta_s < 0.0) beta_s = beta_both;
        if (beta_d < 0.0) beta_d = beta_both;
    }

    // fixed symmetric geometry: platform on the cylinder axis at
    // mid-height, both hop distances sqrt(0.5)
    aeris::analytic::SystemConfig config(double gamma_db) const {
        const double d = std::sqrt(0.5);
        const double omega_s = aeris::geometry::path_loss_spread(d, eta);
        const double omega_d = omega_s;
        return aeris::analytic::SystemConfig{
            n_elements,
            kappa,
            gamma_db,
            target_se,
            aeris::matching::HopPairParams{aeris::NakagamiParams(m_s, omega_s),
                                           aeris::NakagamiParams(m_d, omega_d),
                                           aeris::InverseGammaParams(alpha_s, beta_s),
                                           aeris::InverseGammaParams(alpha_d, beta_d)},
            k_quad};
    }

    json to_json() const {
        return json{{"n", n_elements},       {"kappa", kappa},
                    {"rth", target_se},      {"m_s", m_s},
                    {"m_d", m_d},            {"alpha_s", alpha_s},
                    {"alpha_d", alpha_d},    {"beta_s", beta_s},
                    {"beta_d", beta_d},      {"eta", eta},
                    {"k_quad", k_quad}};
    }
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& flags) {
    cmd->add_option("--n", flags.n_elements, "Number of reflecting elements")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--kappa", flags.kappa, "Amplitude reflection coefficient in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_option("--rth", flags.target_se, "Target spectral efficiency [b/s/Hz]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--m", flags.m_both, "Fading shape for both hops");
    cmd->add_option("--alpha", flags.alpha_both, "Shadowing shape for both hops");
    cmd->add_option("--beta", flags.beta_both, "Shadowing scale for both hops");
    cmd->add_option("--m-s", flags.m_s, "Fading shape, first hop");
    cmd->add_option("--m-d", flags.m_d, "Fading shape, second hop");
    cmd->add_option("--alpha-s", flags.alpha_s, "Shadowing shape, first hop");
    cmd->add_option("--alpha-d", flags.alpha_d, "Shadowing shape, second hop");
    cmd->add_option("--beta-s", flags.beta_s, "Shadowing scale, first hop");
    cmd->add_option("--beta-d", flags.beta_d, "Shadowing scale, second hop");
    cmd->add_option("--eta", flags.eta, "Path-loss exponent")->check(CLI::PositiveNumber);
    cmd->add_option("--k-quad", flags.k_quad, "Gauss-Laguerre order of the mixture")
        ->check(CLI::Range(1, 64));
}

// ------------------------------------------------------------------- grids

std::vector<double> parse_grid(const std::string& spec) {
    // "lo:step:hi" inclusive
    double lo = 0.0, step = 0.0, hi = 0.0;
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw CLI::ValidationError("--grid", "expected lo:step:hi");
    }
    try {
        lo = std::stod(spec.substr(0, first));
        step = std::stod(spec.substr(first + 1, second - first - 1));
        hi = std::stod(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected numeric lo:step:hi");
    }
    if (!(step > 0.0) || hi < lo) {
        throw CLI::ValidationError("--grid", "requires step > 0 and hi >= lo");
    }
    std::vector<double> grid;
    for (double g = lo; g <= hi + 1e-9; g += step) {
        grid.push_back(g);
    }
    return grid;
}

// ------------------------------------------------------------- csv helpers

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) {
            throw std::system_error(errno, std::generic_category(),
                                    "cannot open " + path.string());
        }
        out_ << header << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) {
                out_ << ',';
            }
            out_ << format_double(values[i]);
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) {
            throw std::system_error(errno, std::generic_category(), "write failed");
        }
    }

private:
    std::ofstream out_;
};

// --------------------------------------------------------------- manifests

class ManifestScope {
public:
    ManifestScope(std::string command, const std::filesystem::path& artifact)
        : start_(std::chrono::steady_clock::now()), artifact_(artifact) {
        manifest_["tool_version"] = kToolVersion;
        manifest_["command"] = std::move(command);
        manifest_["artifacts"] = json::array({artifact.string()});
    }

    json& parameters() { return manifest_["parameters"]; }

    void add_artifact(const std::filesystem::path& path) {
        manifest_["artifacts"].push_back(path.string());
    }

    void write() {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        manifest_["duration_seconds"] = elapsed;
        const std::filesystem::path path = artifact_.string() + ".manifest.json";
        std::ofstream out(path);
        if (!out) {
            throw std::system_error(errno, std::generic_category(),
                                    "cannot open " + path.string());
        }
        out << manifest_.dump(2) << '\n';
    }

private:
    json manifest_;
    std::chrono::steady_clock::time_point start_;
    std::filesystem::path artifact_;
};

// ---------------------------------------------------------------- commands

int cmd_analyze(const ScenarioFlags& scenario, const std::vector<double>& grid,
                const std::filesystem::path& out) {
    ManifestScope manifest("analyze", out);
    manifest.parameters() = scenario.to_json();
    manifest.parameters()["gamma_db_grid"] = grid;

    // one mixture serves the whole sweep
    const auto base = scenario.config(0.0);
    base.validate();
    const auto mg = aeris::analytic::build_cascade_mixture(base.hop_params, base.quadrature_order);
    const double gamma_th = base.snr_threshold();

    CsvWriter csv(out, "gamma_db,op_analytic");
    for (const double gamma_db : grid) {
        const double gamma_lin = std::pow(10.0, gamma_db / 10.0);
        const double threshold = gamma_th / (gamma_lin * scenario.kappa * scenario.kappa);
        csv.row({gamma_db, aeris::analytic::cdf_z_squared(mg, scenario.n_elements, threshold)});
    }
    csv.close();
    manifest.write();
    std::printf("analyze: wrote %zu rows to %s\n", grid.size(), out.string().c_str());
    return 0;
}

int cmd_simulate(const ScenarioFlags& scenario, const std::vector<double>& grid,
                 std::uint64_t trials, std::uint64_t seed, bool compare_schemes,
                 const std::filesystem::path& out) {
    ManifestScope manifest("simulate", out);
    manifest.parameters() = scenario.to_json();
    manifest.parameters()["gamma_db_grid"] = grid;
    manifest.parameters()["trials"] = trials;
    manifest.parameters()["seed"] = seed;
    manifest.parameters()["compare_schemes"] = compare_schemes;

    const auto config = scenario.config(0.0);
    const aeris::simulator::TrialBudget budget{trials, seed};

    if (!compare_schemes) {
        const auto curve = aeris::simulator::estimate_op_curve(config, grid, budget);
        CsvWriter csv(out, "gamma_db,op_sim,stderr");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.row({grid[i], curve[i].op, curve[i].std_error});
        }
        csv.close();
    } else {
        using aeris::simulator::RelayScheme;
        const auto ris = aeris::simulator::estimate_op_curve(config, grid, budget);
        const auto hd_df =
            aeris::simulator::estimate_op_relay_curve(RelayScheme::HD_DF, config, grid, budget);
        const auto hd_vg_af = aeris::simulator::estimate_op_relay_curve(RelayScheme::HD_VG_AF,
                                                                        config, grid, budget);
        const auto fd_af =
            aeris::simulator::estimate_op_relay_curve(RelayScheme::FD_AF, config, grid, budget);
        const auto fd_df =
            aeris::simulator::estimate_op_relay_curve(RelayScheme::FD_DF, config, grid, budget);
        CsvWriter csv(out, "gamma_db,op_ris,op_hd_df,op_hd_vg_af,op_fd_af,op_fd_df");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.row({grid[i], ris[i].op, hd_df[i].op, hd_vg_af[i].op, fd_af[i].op, fd_df[i].op});
        }
        csv.close();
    }
    manifest.write();
    std::printf("simulate: wrote %zu rows to %s\n", grid.size(), out.string().c_str());
    return 0;
}

int cmd_dataset(std::uint64_t count, std::uint64_t trials, std::uint64_t seed,
                const std::filesystem::path& out) {
    ManifestScope manifest("dataset", out);
    manifest.parameters()["count"] = count;
    manifest.parameters()["trials_per_row"] = trials;
    manifest.parameters()["master_seed"] = seed;

    const aeris::dataset::FeatureRanges ranges;
    const auto rows = aeris::dataset::generate_dataset(
        count, ranges, aeris::simulator::TrialBudget{trials, 0}, seed);
    aeris::dataset::write_rows(out, rows);

    int extremes = 0;
    for (const auto& row : rows) {
        if (row.label == 0.0 || row.label == 1.0) {
            ++extremes;
        }
    }
    manifest.parameters()["extreme_label_fraction"] =
        static_cast<double>(extremes) / static_cast<double>(rows.size());
    manifest.write();
    std::printf("dataset: wrote %zu rows to %s (%.1f%% of labels at 0 or 1)\n", rows.size(),
                out.string().c_str(), 100.0 * extremes / static_cast<double>(rows.size()));
    return 0;
}

int cmd_train(const std::filesystem::path& corpus, const std::filesystem::path& out,
              aeris::mlp::TrainingConfig cfg, int hidden_layers, int hidden_width,
              std::uint64_t split_seed) {
    ManifestScope manifest("train", out);
    manifest.parameters()["corpus"] = corpus.string();
    manifest.parameters()["hidden_layers"] = hidden_layers;
    manifest.parameters()["hidden_width"] = hidden_width;
    manifest.parameters()["learning_rate"] = cfg.learning_rate;
    manifest.parameters()["max_epochs"] = cfg.max_epochs;
    manifest.parameters()["batch_size"] = cfg.batch_size;
    manifest.parameters()["rmse_threshold"] = cfg.rmse_threshold;
    manifest.parameters()["seed"] = cfg.seed;
    manifest.parameters()["split_seed"] = split_seed;

    const auto rows = aeris::dataset::read_rows(corpus);
    if (rows.empty()) {
        throw aeris::parse_error("train: corpus has no rows");
    }
    const auto split = aeris::dataset::split_dataset(rows, split_seed);

    aeris::mlp::MlpArchitecture arch;
    arch.hidden_layers = hidden_layers;
    arch.hidden_width = hidden_width;
    const auto result = aeris::mlp::train_with_retries(arch, split, cfg);

    aeris::mlp::save_network(out, result.network);

    const std::filesystem::path history_path = out.string() + ".history.csv";
    CsvWriter history(history_path, "epoch,train_mse,val_mse");
    for (std::size_t e = 0; e < result.history.epochs.size(); ++e) {
        history.row({static_cast<double>(e), result.history.epochs[e].train_mse,
                     result.history.epochs[e].validation_mse});
    }
    history.close();
    manifest.add_artifact(history_path);

    const double test_rmse = aeris::mlp::evaluate_rmse(result.network, split.test);
    manifest.parameters()["test_rmse"] = test_rmse;
    manifest.parameters()["best_validation_mse"] = result.history.best_validation_mse;
    manifest.write();
    std::printf("train: %zu rows, test RMSE %.5f (threshold %.5f), model at %s\n", rows.size(),
                test_rmse, cfg.rmse_threshold, out.string().c_str());
    return 0;
}

int cmd_predict(const std::filesystem::path& model_path, const ScenarioFlags& scenario,
                const std::vector<double>& grid, const std::vector<int>& sweep_n,
                const std::optional<std::vector<double>>& feature_row,
                const std::filesystem::path& out) {
    ManifestScope manifest("predict", out);
    manifest.parameters()["model"] = model_path.string();

    const auto net = aeris::mlp::load_network(model_path);

    std::vector<aeris::dataset::FeatureVector> inputs;
    if (feature_row) {
        if (feature_row->size() != aeris::dataset::kFeatureCount) {
            throw CLI::ValidationError("--features",
                                       "expected exactly 13 comma-separated values");
        }
        aeris::dataset::FeatureVector f{};
        std::copy(feature_row->begin(), feature_row->end(), f.begin());
        inputs.push_back(f);
        manifest.parameters()["features"] = *feature_row;
    } else {
        // sweep: scenario parameters at the fixed mid-height axis position
        for (const int n : sweep_n) {
            for (const double gamma_db : grid) {
                aeris::dataset::FeatureVector f{};
                f[aeris::dataset::kGammaDb] = gamma_db;
                f[aeris::dataset::kElements] = n;
                f[aeris::dataset::kAzimuth] = 0.0;
                f[aeris::dataset::kRadial] = 0.0;
                f[aeris::dataset::kHeight] = 0.5;
                f[aeris::dataset::kShapeS] = scenario.m_s;
                f[aeris::dataset::kShapeD] = scenario.m_d;
                f[aeris::dataset::kAlphaS] = scenario.alpha_s;
                f[aeris::dataset::kAlphaD] = scenario.alpha_d;
                f[aeris::dataset::kBetaS] = scenario.beta_s;
                f[aeris::dataset::kBetaD] = scenario.beta_d;
                f[aeris::dataset::kEta] = scenario.eta;
                f[aeris::dataset::kTargetSe] = scenario.target_se;
                inputs.push_back(f);
            }
        }
        manifest.parameters()["scenario"] = scenario.to_json();
        manifest.parameters()["gamma_db_grid"] = grid;
        manifest.parameters()["sweep_n"] = sweep_n;
    }

    CsvWriter csv(out,
                  "gamma_db,n,omega_r,r_r,h_r,m_s,m_d,alpha_s,alpha_d,beta_s,beta_d,eta,r_th,"
                  "op_pred");
    for (const auto& f : inputs) {
        std::vector<double> row(f.begin(), f.end());
        row.push_back(aeris::mlp::forward(net, f));
        csv.row(row);
    }
    csv.close();
    manifest.write();
    std::printf("predict: wrote %zu rows to %s\n", inputs.size(), out.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis toolkit for the aerial reflecting-surface link"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Closed-form outage curve over a SNR grid");
    ScenarioFlags an_scenario;
    add_scenario_flags(analyze, an_scenario);
    std::string an_grid = "-10:1:20";
    std::string an_gamma;
    std::string an_out = "analyze.csv";
    analyze->add_option("--grid", an_grid, "gamma-bar grid lo:step:hi [dB]");
    analyze->add_option("--gamma-db", an_gamma, "Single gamma-bar point [dB]");
    analyze->add_option("--out", an_out, "Output CSV path");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo outage curve over a SNR grid");
    ScenarioFlags sim_scenario;
    add_scenario_flags(simulate, sim_scenario);
    std::string sim_grid = "-10:1:20";
    std::string sim_gamma;
    std::string sim_out = "simulate.csv";
    std::uint64_t sim_trials = 1000000;
    std::uint64_t sim_seed = 1;
    bool sim_compare = false;
    simulate->add_option("--grid", sim_grid, "gamma-bar grid lo:step:hi [dB]");
    simulate->add_option("--gamma-db", sim_gamma, "Single gamma-bar point [dB]");
    simulate->add_option("--trials", sim_trials, "Monte-Carlo trials per curve")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "Random seed");
    simulate->add_flag("--compare-schemes", sim_compare,
                       "Also simulate the four relay baselines");
    simulate->add_option("--out", sim_out, "Output CSV path");

    // dataset
    auto* dataset_cmd = app.add_subcommand("dataset", "Generate a labeled training corpus");
    std::uint64_t ds_count = 10000;
    std::uint64_t ds_trials = 100000;
    std::uint64_t ds_seed = 1;
    std::string ds_out = "corpus.csv";
    dataset_cmd->add_option("--count", ds_count, "Number of rows")->check(CLI::PositiveNumber);
    dataset_cmd->add_option("--trials", ds_trials, "Simulation trials per row")
        ->check(CLI::PositiveNumber);
    dataset_cmd->add_option("--seed", ds_seed, "Master seed");
    dataset_cmd->add_option("--out", ds_out, "Output corpus path");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the outage predictor on a corpus");
    std::string tr_corpus;
    std::string tr_out = "model.bin";
    aeris::mlp::TrainingConfig tr_cfg;
    tr_cfg.max_epochs = 200;
    int tr_layers = 5;
    int tr_width = 128;
    std::uint64_t tr_split_seed = 1;
    train_cmd->add_option("--corpus", tr_corpus, "Corpus CSV path")->required();
    train_cmd->add_option("--out", tr_out, "Model output path");
    train_cmd->add_option("--epochs", tr_cfg.max_epochs, "Epoch budget per attempt")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--batch", tr_cfg.batch_size, "Mini-batch size")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--lr", tr_cfg.learning_rate, "Learning rate")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--rmse-th", tr_cfg.rmse_threshold, "Target RMSE gate")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", tr_cfg.seed, "Training seed");
    train_cmd->add_option("--split-seed", tr_split_seed, "Corpus split seed");
    train_cmd->add_option("--hidden-layers", tr_layers, "Hidden layer count")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--hidden-width", tr_width, "Hidden layer width")
        ->check(CLI::PositiveNumber);

    // predict
    auto* predict = app.add_subcommand("predict", "Predict outage with a trained model");
    ScenarioFlags pr_scenario;
    add_scenario_flags(predict, pr_scenario);
    std::string pr_model;
    std::string pr_grid = "-10:1:20";
    std::string pr_sweep_n = "20";
    std::string pr_features;
    std::string pr_out = "predict.csv";
    predict->add_option("--model", pr_model, "Trained model path")->required();
    predict->add_option("--grid", pr_grid, "gamma-bar grid lo:step:hi [dB]");
    predict->add_option("--sweep-n", pr_sweep_n, "Comma-separated element counts");
    predict->add_option("--features", pr_features,
                        "Predict one row: 13 comma-separated feature values");
    predict->add_option("--out", pr_out, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) {
            an_scenario.resolve();
            const auto grid =
                an_gamma.empty() ? parse_grid(an_grid) : std::vector<double>{std::stod(an_gamma)};
            return cmd_analyze(an_scenario, grid, an_out);
        }
        if (*simulate) {
            sim_scenario.resolve();
            const auto grid = sim_gamma.empty() ? parse_grid(sim_grid)
                                                : std::vector<double>{std::stod(sim_gamma)};
            return cmd_simulate(sim_scenario, grid, sim_trials, sim_seed, sim_compare, sim_out);
        }
        if (*dataset_cmd) {
            return cmd_dataset(ds_count, ds_trials, ds_seed, ds_out);
        }
        if (*train_cmd) {
            return cmd_train(tr_corpus, tr_out, tr_cfg, tr_layers, tr_width, tr_split_seed);
        }
        if (*predict) {
            pr_scenario.resolve();
            std::optional<std::vector<double>> feature_row;
            if (!pr_features.empty()) {
                std::vector<double> values;
                std::string_view rest(pr_features);
                while (!rest.empty()) {
                    const auto pos = rest.find(',');
                    values.push_back(std::stod(std::string(rest.substr(0, pos))));
                    rest = pos == std::string_view::npos ? std::string_view()
                                                         : rest.substr(pos + 1);
                }
                feature_row = std::move(values);
            }
            std::vector<int> sweep;
            {
                std::string_view rest(pr_sweep_n);
                while (!rest.empty()) {
                    const auto pos = rest.find(',');
                    sweep.push_back(std::stoi(std::string(rest.substr(0, pos))));
                    rest = pos == std::string_view::npos ? std::string_view()
                                                         : rest.substr(pos + 1);
                }
            }
            return cmd_predict(pr_model, pr_scenario, parse_grid(pr_grid), sweep, feature_row,
                               pr_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const aeris::convergence_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const aeris::instability_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const aeris::degeneracy_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const aeris::training_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const aeris::capacity_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const aeris::parse_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::system_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}

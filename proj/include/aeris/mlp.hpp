#ifndef AERIS_MLP_HPP
#define AERIS_MLP_HPP

#include "aeris/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aeris::mlp {

// Feed-forward regression network: input -> hidden_layers x hidden_width
// (ReLU) -> 1 (linear).
struct MlpArchitecture {
    int input_dim = dataset::kFeatureCount;
    int hidden_layers = 5;
    int hidden_width = 128;
    int output_dim = 1;

    void validate() const;
    int layer_count() const { return hidden_layers + 1; }
};

// Per-feature standardization statistics, frozen into the network when it
// is trained.
struct Normalization {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;
};

struct MlpNetwork {
    MlpArchitecture architecture;
    std::vector<Eigen::MatrixXd> weights;  // weights[l] is (fan_out x fan_in)
    std::vector<Eigen::VectorXd> biases;
    Normalization normalization;
};

struct TrainingConfig {
    double learning_rate = 1e-3;
    int max_epochs = 300;
    int batch_size = 256;
    double rmse_threshold = 2e-2;
    std::uint64_t seed = 1;

    void validate() const;
};

struct EpochStats {
    double train_mse;
    double validation_mse;
};

struct TrainingHistory {
    std::vector<EpochStats> epochs;
    int best_epoch = -1;
    double best_validation_mse = 0.0;
};

struct TrainingResult {
    MlpNetwork network;  // best-validation weights
    TrainingHistory history;
};

// Gradient of the mean-squared-error batch loss, one tensor per layer.
struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

// He-style initialization: weights ~ Normal(0, sqrt(2/fan_in)), biases
// zero, identity normalization; deterministic per seed.
MlpNetwork init_network(const MlpArchitecture& arch, std::uint64_t seed);

// Prediction surface: normalized input through the ReLU stack, output
// clamped to [0, 1]. forward_raw skips the clamp (training view).
double forward(const MlpNetwork& net, std::span<const double> features);
double forward_raw(const MlpNetwork& net, std::span<const double> features);

// Batch MSE loss and its gradient; inputs as columns. Exposed so the
// backprop path can be checked against finite differences.
double batch_loss_and_gradient(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& labels, Gradients& grads);

// Mini-batch Adam on MSE. Retains the best-validation weights; stops at
// max_epochs or when validation RMSE reaches cfg.rmse_threshold.
TrainingResult train(const MlpNetwork& net, const dataset::DatasetSplit& split,
                     const TrainingConfig& cfg);

// Bounded retry schedule around train(): gate on held-out test RMSE, then
// double the epoch budget, then halve the learning rate (at most 3 retries).
TrainingResult train_with_retries(const MlpArchitecture& arch,
                                  const dataset::DatasetSplit& split,
                                  const TrainingConfig& cfg, int max_retries = 3);

// Root-mean-square prediction error over rows (clamped predictions).
double evaluate_rmse(const MlpNetwork& net, std::span<const dataset::DatasetRow> rows);

// Self-describing binary container; layout documented in mlp.cpp next to
// the writer.
void save_network(const std::filesystem::path& path, const MlpNetwork& net);
MlpNetwork load_network(const std::filesystem::path& path);

} // namespace aeris::mlp

#endif

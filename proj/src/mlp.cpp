#include "aeris/mlp.hpp"
#include "aeris/errors.hpp"
#include "aeris/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace aeris::mlp {

void MlpArchitecture::validate() const {
    if (input_dim < 1 || hidden_layers < 1 || hidden_width < 1 || output_dim != 1) {
        throw std::invalid_argument(
            "MlpArchitecture: dims must be positive and output_dim must be 1");
    }
}

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0) || max_epochs < 1 || batch_size < 1 ||
        !(rmse_threshold > 0.0)) {
        throw std::invalid_argument("TrainingConfig: all settings must be positive");
    }
}

MlpNetwork init_network(const MlpArchitecture& arch, std::uint64_t seed) {
    arch.validate();
    MlpNetwork net;
    net.architecture = arch;
    net.normalization.mean = Eigen::VectorXd::Zero(arch.input_dim);
    net.normalization.scale = Eigen::VectorXd::Ones(arch.input_dim);

    RngHandle rng(seed);
    int fan_in = arch.input_dim;
    for (int l = 0; l < arch.layer_count(); ++l) {
        const int fan_out = l == arch.hidden_layers ? arch.output_dim : arch.hidden_width;
        Eigen::MatrixXd w(fan_out, fan_in);
        const double sigma = std::sqrt(2.0 / fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) {
                w(r, c) = sigma * rng.normal();
            }
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
        fan_in = fan_out;
    }
    return net;
}

namespace {

Eigen::VectorXd normalized_input(const MlpNetwork& net, std::span<const double> features) {
    const int dim = net.architecture.input_dim;
    if (static_cast<int>(features.size()) != dim) {
        throw std::invalid_argument("forward: feature count does not match the input layer");
    }
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) {
        if (!std::isfinite(features[i])) {
            throw std::domain_error("forward: non-finite feature value");
        }
        x(i) = (features[i] - net.normalization.mean(i)) / net.normalization.scale(i);
    }
    return x;
}

} // namespace

double forward_raw(const MlpNetwork& net, std::span<const double> features) {
    Eigen::VectorXd a = normalized_input(net, features);
    const int layers = net.architecture.layer_count();
    for (int l = 0; l < layers; ++l) {
        a = (net.weights[l] * a + net.biases[l]).eval();
        if (l + 1 < layers) {
            a = a.cwiseMax(0.0);
        }
    }
    return a(0);
}

double forward(const MlpNetwork& net, std::span<const double> features) {
    return std::clamp(forward_raw(net, features), 0.0, 1.0);
}

double batch_loss_and_gradient(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& labels, Gradients& grads) {
    const int layers = net.architecture.layer_count();
    const auto batch = static_cast<int>(inputs.cols());
    if (labels.size() != batch) {
        throw std::invalid_argument("batch_loss_and_gradient: label/input size mismatch");
    }

    // forward, keeping post-activation values per layer
    std::vector<Eigen::MatrixXd> activations(layers + 1);
    activations[0] = inputs;
    for (int l = 0; l < layers; ++l) {
        Eigen::MatrixXd z =
            (net.weights[l] * activations[l]).colwise() + net.biases[l];
        activations[l + 1] = l + 1 < layers ? z.cwiseMax(0.0) : std::move(z);
    }

    const Eigen::RowVectorXd out = activations[layers].row(0);
    const Eigen::RowVectorXd residual = out - labels.transpose();
    const double loss = residual.squaredNorm() / batch;

    grads.weights.resize(layers);
    grads.biases.resize(layers);
    // d(loss)/d(out) = 2 residual / batch; linear output layer
    Eigen::MatrixXd delta = (2.0 / batch) * residual;
    for (int l = layers - 1; l >= 0; --l) {
        grads.weights[l] = delta * activations[l].transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            // ReLU gate: the subgradient at 0 is taken as 0
            delta = (net.weights[l].transpose() * delta)
                        .cwiseProduct((activations[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return loss;
}

namespace {

Eigen::MatrixXd rows_to_inputs(const MlpNetwork& net,
                               std::span<const dataset::DatasetRow> rows) {
    const int dim = net.architecture.input_dim;
    Eigen::MatrixXd inputs(dim, rows.size());
    for (std::size_t c = 0; c < rows.size(); ++c) {
        for (int r = 0; r < dim; ++r) {
            inputs(r, c) =
                (rows[c].features[r] - net.normalization.mean(r)) / net.normalization.scale(r);
        }
    }
    return inputs;
}

Eigen::VectorXd rows_to_labels(std::span<const dataset::DatasetRow> rows) {
    Eigen::VectorXd labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        labels(i) = rows[i].label;
    }
    return labels;
}

double raw_mse(const MlpNetwork& net, const Eigen::MatrixXd& inputs,
               const Eigen::VectorXd& labels) {
    const int layers = net.architecture.layer_count();
    Eigen::MatrixXd a = inputs;
    for (int l = 0; l < layers; ++l) {
        a = ((net.weights[l] * a).colwise() + net.biases[l]).eval();
        if (l + 1 < layers) {
            a = a.cwiseMax(0.0);
        }
    }
    return (a.row(0) - labels.transpose()).squaredNorm() / labels.size();
}

struct AdamState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long step = 0;

    explicit AdamState(const MlpNetwork& net) {
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            m_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
            v_w.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
            m_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
            v_b.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
        }
    }

    void update(MlpNetwork& net, const Gradients& grads, double lr) {
        constexpr double kBeta1 = 0.9;
        constexpr double kBeta2 = 0.999;
        constexpr double kEps = 1e-8;
        ++step;
        const double correction1 = 1.0 - std::pow(kBeta1, step);
        const double correction2 = 1.0 - std::pow(kBeta2, step);
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            m_w[l] = kBeta1 * m_w[l] + (1.0 - kBeta1) * grads.weights[l];
            v_w[l] = kBeta2 * v_w[l] + (1.0 - kBeta2) * grads.weights[l].cwiseAbs2();
            net.weights[l].array() -=
                lr * (m_w[l].array() / correction1) /
                ((v_w[l].array() / correction2).sqrt() + kEps);
            m_b[l] = kBeta1 * m_b[l] + (1.0 - kBeta1) * grads.biases[l];
            v_b[l] = kBeta2 * v_b[l] + (1.0 - kBeta2) * grads.biases[l].cwiseAbs2();
            net.biases[l].array() -=
                lr * (m_b[l].array() / correction1) /
                ((v_b[l].array() / correction2).sqrt() + kEps);
        }
    }
};

} // namespace

TrainingResult train(const MlpNetwork& net, const dataset::DatasetSplit& split,
                     const TrainingConfig& cfg) {
    cfg.validate();
    if (split.train.empty() || split.validation.empty()) {
        throw std::invalid_argument("train: training and validation splits must be non-empty");
    }

    MlpNetwork model = net;

    // freeze per-feature standardization from the training split
    const int dim = model.architecture.input_dim;
    model.normalization.mean = Eigen::VectorXd::Zero(dim);
    model.normalization.scale = Eigen::VectorXd::Ones(dim);
    {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
        for (const dataset::DatasetRow& row : split.train) {
            for (int i = 0; i < dim; ++i) {
                mean(i) += row.features[i];
            }
        }
        mean /= static_cast<double>(split.train.size());
        Eigen::VectorXd var = Eigen::VectorXd::Zero(dim);
        for (const dataset::DatasetRow& row : split.train) {
            for (int i = 0; i < dim; ++i) {
                const double d = row.features[i] - mean(i);
                var(i) += d * d;
            }
        }
        var /= static_cast<double>(split.train.size());
        model.normalization.mean = mean;
        model.normalization.scale =
            var.array().sqrt().max(1e-12).matrix();
    }

    const Eigen::MatrixXd train_inputs = rows_to_inputs(model, split.train);
    const Eigen::VectorXd train_labels = rows_to_labels(split.train);
    const Eigen::MatrixXd val_inputs = rows_to_inputs(model, split.validation);
    const Eigen::VectorXd val_labels = rows_to_labels(split.validation);

    const auto n_train = static_cast<std::size_t>(split.train.size());
    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
        order[i] = i;
    }

    RngHandle shuffle_rng(cfg.seed);
    AdamState adam(model);
    Gradients grads;
    TrainingResult result;
    result.history.best_validation_mse = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        for (std::size_t i = n_train - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(
                (static_cast<unsigned __int128>(shuffle_rng.next_u64()) * (i + 1)) >> 64);
            std::swap(order[i], order[j]);
        }

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < n_train;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t count =
                std::min<std::size_t>(cfg.batch_size, n_train - start);
            Eigen::MatrixXd batch_in(train_inputs.rows(), count);
            Eigen::VectorXd batch_labels(count);
            for (std::size_t c = 0; c < count; ++c) {
                batch_in.col(c) = train_inputs.col(order[start + c]);
                batch_labels(c) = train_labels(order[start + c]);
            }
            const double loss = batch_loss_and_gradient(model, batch_in, batch_labels, grads);
            if (!std::isfinite(loss)) {
                throw training_error("train: loss diverged at epoch " + std::to_string(epoch),
                                     epoch);
            }
            epoch_loss += loss * count;
            seen += count;
            adam.update(model, grads, cfg.learning_rate);
        }

        const double train_mse = epoch_loss / static_cast<double>(seen);
        const double val_mse = raw_mse(model, val_inputs, val_labels);
        if (!std::isfinite(val_mse)) {
            throw training_error("train: validation loss diverged at epoch " +
                                 std::to_string(epoch),
                                 epoch);
        }
        result.history.epochs.push_back(EpochStats{train_mse, val_mse});
        if (val_mse < result.history.best_validation_mse) {
            result.history.best_validation_mse = val_mse;
            result.history.best_epoch = epoch;
            result.network = model;
        }
        if (std::sqrt(val_mse) <= cfg.rmse_threshold) {
            break;
        }
    }
    return result;
}

TrainingResult train_with_retries(const MlpArchitecture& arch,
                                  const dataset::DatasetSplit& split,
                                  const TrainingConfig& cfg, int max_retries) {
    if (split.test.empty()) {
        throw std::invalid_argument("train_with_retries: test split must be non-empty");
    }

    TrainingConfig attempt_cfg = cfg;
    TrainingResult best;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        if (attempt == 1) {
            attempt_cfg.max_epochs *= 2;
        } else if (attempt == 2) {
            attempt_cfg.learning_rate *= 0.5;
        } else if (attempt > 2) {
            attempt_cfg.max_epochs *= 2;
        }
        attempt_cfg.seed = cfg.seed + static_cast<std::uint64_t>(attempt);

        TrainingResult result =
            train(init_network(arch, attempt_cfg.seed), split, attempt_cfg);
        const double test_rmse = evaluate_rmse(result.network, split.test);
        if (test_rmse < best_rmse) {
            best_rmse = test_rmse;
            best = std::move(result);
        }
        if (best_rmse < cfg.rmse_threshold) {
            break;
        }
    }
    return best;
}

double evaluate_rmse(const MlpNetwork& net, std::span<const dataset::DatasetRow> rows) {
    if (rows.empty()) {
        throw std::invalid_argument("evaluate_rmse: requires at least one row");
    }
    double acc = 0.0;
    for (const dataset::DatasetRow& row : rows) {
        const double err = forward(net, row.features) - row.label;
        acc += err * err;
    }
    return std::sqrt(acc / static_cast<double>(rows.size()));
}

// Model container layout (little-endian):
//   char[8]  magic "AERISNN\0"
//   u32      version (1)
//   i32      input_dim, hidden_layers, hidden_width, output_dim
//   f64[input_dim]   normalization mean
//   f64[input_dim]   normalization scale
//   per layer (hidden_layers + 1 of them):
//     i32 rows, i32 cols, f64[rows*cols] weights (row-major), f64[rows] bias
namespace {

constexpr char kMagic[8] = {'A', 'E', 'R', 'I', 'S', 'N', 'N', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const char* what) {
    T value;
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw parse_error(std::string("load_network: truncated file while reading ") + what);
    }
    return value;
}

} // namespace

void save_network(const std::filesystem::path& path, const MlpNetwork& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("save_network: cannot open " + path.string());
    }
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::int32_t>(net.architecture.input_dim));
    write_pod(out, static_cast<std::int32_t>(net.architecture.hidden_layers));
    write_pod(out, static_cast<std::int32_t>(net.architecture.hidden_width));
    write_pod(out, static_cast<std::int32_t>(net.architecture.output_dim));
    for (int i = 0; i < net.architecture.input_dim; ++i) {
        write_pod(out, net.normalization.mean(i));
    }
    for (int i = 0; i < net.architecture.input_dim; ++i) {
        write_pod(out, net.normalization.scale(i));
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Eigen::MatrixXd& w = net.weights[l];
        write_pod(out, static_cast<std::int32_t>(w.rows()));
        write_pod(out, static_cast<std::int32_t>(w.cols()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                write_pod(out, w(r, c));
            }
        }
        for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
            write_pod(out, net.biases[l](r));
        }
    }
    if (!out) {
        throw std::runtime_error("save_network: write failed for " + path.string());
    }
}

MlpNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_network: cannot open " + path.string());
    }
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw parse_error("load_network: bad magic in " + path.string());
    }
    const auto version = read_pod<std::uint32_t>(in, "version");
    if (version != kVersion) {
        throw parse_error("load_network: unsupported container version " +
                          std::to_string(version));
    }

    MlpNetwork net;
    net.architecture.input_dim = read_pod<std::int32_t>(in, "input_dim");
    net.architecture.hidden_layers = read_pod<std::int32_t>(in, "hidden_layers");
    net.architecture.hidden_width = read_pod<std::int32_t>(in, "hidden_width");
    net.architecture.output_dim = read_pod<std::int32_t>(in, "output_dim");
    net.architecture.validate();

    net.normalization.mean = Eigen::VectorXd(net.architecture.input_dim);
    net.normalization.scale = Eigen::VectorXd(net.architecture.input_dim);
    for (int i = 0; i < net.architecture.input_dim; ++i) {
        net.normalization.mean(i) = read_pod<double>(in, "normalization mean");
    }
    for (int i = 0; i < net.architecture.input_dim; ++i) {
        net.normalization.scale(i) = read_pod<double>(in, "normalization scale");
    }

    int fan_in = net.architecture.input_dim;
    for (int l = 0; l < net.architecture.layer_count(); ++l) {
        const int expect_rows =
            l == net.architecture.hidden_layers ? net.architecture.output_dim
                                                : net.architecture.hidden_width;
        const auto rows = read_pod<std::int32_t>(in, "layer rows");
        const auto cols = read_pod<std::int32_t>(in, "layer cols");
        if (rows != expect_rows || cols != fan_in) {
            throw parse_error("load_network: layer " + std::to_string(l) +
                              " shape does not match the architecture header");
        }
        Eigen::MatrixXd w(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                w(r, c) = read_pod<double>(in, "layer weights");
            }
        }
        Eigen::VectorXd b(rows);
        for (int r = 0; r < rows; ++r) {
            b(r) = read_pod<double>(in, "layer bias");
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(std::move(b));
        fan_in = rows;
    }
    // reject trailing garbage so truncation and concatenation both fail loudly
    char extra;
    if (in.read(&extra, 1)) {
        throw parse_error("load_network: trailing bytes after the declared payload");
    }
    return net;
}

} // namespace aeris::mlp

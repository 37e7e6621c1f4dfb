#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nnlsm {

/// Widths d_0, ..., d_L of a feed-forward network with L affine maps. d_0 is the
/// input dimension, d_L = 1, hidden layers share the same width.
struct NetworkShape {
    std::vector<int> widths;

    /// Input dim r, L = depth affine maps, hidden width p.
    static NetworkShape mlp(int input_dim, int depth, int hidden_width);

    [[nodiscard]] int depth() const noexcept { return static_cast<int>(widths.size()) - 1; }
    [[nodiscard]] int input_dim() const { return widths.front(); }
    /// sum_l d_l (1 + d_{l-1})
    [[nodiscard]] std::size_t parameter_count() const;
    void validate() const;

    friend bool operator==(const NetworkShape&, const NetworkShape&) = default;
};

/// x for x >= 0, slope * x otherwise. The derivative at 0 is taken to be 1.
struct LeakyRelu {
    double negative_slope = 0.3;

    [[nodiscard]] double operator()(double x) const noexcept { return x >= 0.0 ? x : negative_slope * x; }
    [[nodiscard]] double derivative(double x) const noexcept { return x >= 0.0 ? 1.0 : negative_slope; }
};

struct Layer {
    Eigen::MatrixXd weights;  // d_l x d_{l-1}
    Eigen::VectorXd bias;     // d_l
};

struct NetworkParams {
    std::vector<Layer> layers;

    [[nodiscard]] NetworkShape shape() const;
    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] bool all_finite() const;

    /// Layer-ordered flat view: W_1 (row-major), beta_1, W_2, beta_2, ...
    [[nodiscard]] std::vector<double> flatten() const;
    void assign_flat(std::span<const double> values);

    static NetworkParams zeros(const NetworkShape& shape);
};

/// Glorot-uniform weights, zero biases.
NetworkParams init_params(const NetworkShape& shape, std::uint64_t seed);

/// Phi(x) = A_L o act o A_{L-1} o ... o act o A_1 (x); no activation on the output.
double forward(const NetworkParams& params, std::span<const double> x, const LeakyRelu& act = {});

/// Outputs for every column of `inputs` (d_0 x B).
Eigen::VectorXd forward_batch(const NetworkParams& params, const Eigen::MatrixXd& inputs,
                              const LeakyRelu& act = {});

struct LossGradient {
    double mse = 0.0;
    NetworkParams gradient;
};

/// Mean squared error over the columns of `inputs` and its exact gradient.
LossGradient loss_and_gradient(const NetworkParams& params, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, const LeakyRelu& act = {});

struct TrainConfig {
    int epochs = 10;
    int batch_size = 256;
    double learning_rate = 1e-3;
    /// Rate used in the last epoch, reached by per-epoch geometric decay from
    /// learning_rate; 0 keeps the rate constant.
    double final_learning_rate = 0.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool standardize_inputs = true;
    /// Train against (y - mean) / std and fold the map into the output layer.
    bool standardize_targets = false;
    /// Global parameter-norm bound applied after each step; 0 disables it.
    double max_norm = 0.0;
    LeakyRelu activation{};
    std::uint64_t seed = 0;

    void validate() const;
    double epoch_learning_rate(int epoch) const;
};

struct AdamMoments {
    NetworkParams first;
    NetworkParams second;

    static AdamMoments zeros_like(const NetworkParams& params);
};

/// One bias-corrected ADAM update; step_index counts from 1.
void adam_step(NetworkParams& params, const NetworkParams& grad, AdamMoments& moments,
               long step_index, const TrainConfig& config);

struct FitReport {
    double initial_mse = 0.0;
    double final_mse = 0.0;
    std::vector<double> epoch_mse;  // running minibatch average per epoch
    std::size_t samples = 0;
};

struct FitResult {
    NetworkParams params;
    FitReport report;
};

/// Minibatch ADAM over `config.epochs` shuffled passes of the columns of `inputs`,
/// starting from `initial`. With standardization on, training runs in standardized
/// coordinates and the affine maps are folded back into the first (inputs) and last
/// (targets) layers, so the returned parameters act on raw data. Reported MSEs are
/// in raw target units.
FitResult fit(const NetworkParams& initial, const Eigen::MatrixXd& inputs,
              const Eigen::VectorXd& targets, const TrainConfig& config);

/// JSON checkpoint: {"widths": [...], "layers": [{"weights": [row-major], "bias": [...]}, ...]}.
void save_checkpoint(const std::filesystem::path& file, const NetworkParams& params);
NetworkParams load_checkpoint(const std::filesystem::path& file);

}  // namespace nnlsm

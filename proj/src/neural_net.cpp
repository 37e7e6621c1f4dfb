#include "nnlsm/neural_net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "nnlsm/rng.hpp"

namespace nnlsm {

NetworkShape NetworkShape::mlp(int input_dim, int depth, int hidden_width) {
    NetworkShape shape;
    shape.widths.push_back(input_dim);
    for (int l = 1; l < depth; ++l) shape.widths.push_back(hidden_width);
    shape.widths.push_back(1);
    shape.validate();
    return shape;
}

std::size_t NetworkShape::parameter_count() const {
    std::size_t count = 0;
    for (std::size_t l = 1; l < widths.size(); ++l)
        count += static_cast<std::size_t>(widths[l]) * (1 + static_cast<std::size_t>(widths[l - 1]));
    return count;
}

void NetworkShape::validate() const {
    if (widths.size() < 3) throw std::invalid_argument("NetworkShape: depth must be >= 2");
    if (widths.back() != 1) throw std::invalid_argument("NetworkShape: output width must be 1");
    for (int w : widths)
        if (w < 1) throw std::invalid_argument("NetworkShape: widths must be >= 1");
}

NetworkShape NetworkParams::shape() const {
    NetworkShape s;
    if (layers.empty()) return s;
    s.widths.push_back(static_cast<int>(layers.front().weights.cols()));
    for (const auto& layer : layers) s.widths.push_back(static_cast<int>(layer.weights.rows()));
    return s;
}

std::size_t NetworkParams::parameter_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers) count += layer.weights.size() + layer.bias.size();
    return count;
}

bool NetworkParams::all_finite() const {
    return std::all_of(layers.begin(), layers.end(), [](const Layer& layer) {
        return layer.weights.allFinite() && layer.bias.allFinite();
    });
}

std::vector<double> NetworkParams::flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& layer : layers) {
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) out.push_back(layer.weights(i, j));
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) out.push_back(layer.bias(i));
    }
    return out;
}

void NetworkParams::assign_flat(std::span<const double> values) {
    if (values.size() != parameter_count())
        throw std::invalid_argument("NetworkParams: flat parameter vector has the wrong length");
    std::size_t k = 0;
    for (auto& layer : layers) {
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = values[k++];
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = values[k++];
    }
}

NetworkParams NetworkParams::zeros(const NetworkShape& shape) {
    shape.validate();
    NetworkParams params;
    for (int l = 1; l <= shape.depth(); ++l) {
        params.layers.push_back({Eigen::MatrixXd::Zero(shape.widths[l], shape.widths[l - 1]),
                                 Eigen::VectorXd::Zero(shape.widths[l])});
    }
    return params;
}

NetworkParams init_params(const NetworkShape& shape, std::uint64_t seed) {
    NetworkParams params = NetworkParams::zeros(shape);
    Rng rng(seed);
    for (auto& layer : params.layers) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j)
                layer.weights(i, j) = limit * (2.0 * rng.uniform() - 1.0);
    }
    return params;
}

double forward(const NetworkParams& params, std::span<const double> x, const LeakyRelu& act) {
    const auto& layers = params.layers;
    if (layers.empty() || static_cast<Eigen::Index>(x.size()) != layers.front().weights.cols())
        throw std::invalid_argument("forward: input dimension does not match the network");

    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& w = layers[l].weights;
        next.assign(static_cast<std::size_t>(w.rows()), 0.0);
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            double s = layers[l].bias(i);
            for (Eigen::Index j = 0; j < w.cols(); ++j) s += w(i, j) * current[j];
            next[i] = (l + 1 < layers.size()) ? act(s) : s;
        }
        current.swap(next);
    }
    return current[0];
}

namespace {

void apply_activation(Eigen::MatrixXd& z, const LeakyRelu& act) {
    z = z.unaryExpr([&act](double v) { return act(v); });
}

// Pre-activations for every layer on a column batch.
std::vector<Eigen::MatrixXd> forward_trace(const NetworkParams& params, const Eigen::MatrixXd& inputs,
                                           const LeakyRelu& act, std::vector<Eigen::MatrixXd>& activations) {
    const auto& layers = params.layers;
    std::vector<Eigen::MatrixXd> pre(layers.size());
    activations.assign(layers.size() + 1, {});
    activations[0] = inputs;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        pre[l].noalias() = layers[l].weights * activations[l];
        pre[l].colwise() += layers[l].bias;
        activations[l + 1] = pre[l];
        if (l + 1 < layers.size()) apply_activation(activations[l + 1], act);
    }
    return pre;
}

void check_batch(const NetworkParams& params, const Eigen::MatrixXd& inputs) {
    if (params.layers.empty() || inputs.rows() != params.layers.front().weights.cols())
        throw std::invalid_argument("network: input dimension does not match the network");
}

}  // namespace

Eigen::VectorXd forward_batch(const NetworkParams& params, const Eigen::MatrixXd& inputs, const LeakyRelu& act) {
    check_batch(params, inputs);
    Eigen::MatrixXd current = inputs;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Eigen::MatrixXd next = params.layers[l].weights * current;
        next.colwise() += params.layers[l].bias;
        if (l + 1 < params.layers.size()) apply_activation(next, act);
        current.swap(next);
    }
    return current.row(0).transpose();
}

LossGradient loss_and_gradient(const NetworkParams& params, const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, const LeakyRelu& act) {
    check_batch(params, inputs);
    const Eigen::Index batch = inputs.cols();
    if (batch < 1) throw std::invalid_argument("loss_and_gradient: empty batch");
    if (targets.size() != batch) throw std::invalid_argument("loss_and_gradient: targets size mismatch");
    if (!inputs.allFinite() || !targets.allFinite())
        throw std::invalid_argument("loss_and_gradient: non-finite inputs or targets");

    const auto& layers = params.layers;
    std::vector<Eigen::MatrixXd> activations;
    const auto pre = forward_trace(params, inputs, act, activations);

    const Eigen::RowVectorXd residual = activations.back().row(0) - targets.transpose();
    LossGradient out;
    out.mse = residual.squaredNorm() / static_cast<double>(batch);
    out.gradient = NetworkParams::zeros(params.shape());

    // delta holds d(mse)/d(pre-activation) of the current layer.
    Eigen::MatrixXd delta = (2.0 / static_cast<double>(batch)) * residual;
    for (std::size_t l = layers.size(); l-- > 0;) {
        out.gradient.layers[l].weights.noalias() = delta * activations[l].transpose();
        out.gradient.layers[l].bias = delta.rowwise().sum();
        if (l == 0) break;
        Eigen::MatrixXd back = layers[l].weights.transpose() * delta;
        const auto& z = pre[l - 1];
        delta = back.binaryExpr(z, [&act](double g, double v) { return g * act.derivative(v); });
    }
    return out;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be > 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw std::invalid_argument("TrainConfig: moment decays must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("TrainConfig: epsilon must be > 0");
    if (max_norm < 0.0) throw std::invalid_argument("TrainConfig: max_norm must be >= 0");
    if (final_learning_rate < 0.0) throw std::invalid_argument("TrainConfig: final learning rate must be >= 0");
}

double TrainConfig::epoch_learning_rate(int epoch) const {
    if (final_learning_rate <= 0.0 || epochs < 2) return learning_rate;
    const double t = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
    return learning_rate * std::pow(final_learning_rate / learning_rate, t);
}

AdamMoments AdamMoments::zeros_like(const NetworkParams& params) {
    const auto shape = params.shape();
    return {NetworkParams::zeros(shape), NetworkParams::zeros(shape)};
}

void adam_step(NetworkParams& params, const NetworkParams& grad, AdamMoments& moments, long step_index,
               const TrainConfig& config) {
    if (step_index < 1) throw std::invalid_argument("adam_step: step index starts at 1");
    const double b1 = config.beta1;
    const double b2 = config.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_index));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_index));
    const double lr = config.learning_rate;
    const double eps = config.epsilon;

    auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        p.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
    };
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        update(params.layers[l].weights, grad.layers[l].weights, moments.first.layers[l].weights,
               moments.second.layers[l].weights);
        update(params.layers[l].bias, grad.layers[l].bias, moments.first.layers[l].bias,
               moments.second.layers[l].bias);
    }

    if (config.max_norm > 0.0) {
        double norm2 = 0.0;
        for (const auto& layer : params.layers) norm2 += layer.weights.squaredNorm() + layer.bias.squaredNorm();
        const double norm = std::sqrt(norm2);
        if (norm > config.max_norm) {
            const double s = config.max_norm / norm;
            for (auto& layer : params.layers) {
                layer.weights *= s;
                layer.bias *= s;
            }
        }
    }
}

namespace {

struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;
};

Standardization column_statistics(const Eigen::MatrixXd& inputs) {
    const double n = static_cast<double>(inputs.cols());
    Standardization s;
    s.mean = inputs.rowwise().mean();
    s.scale.resize(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        const double var = (inputs.row(i).array() - s.mean(i)).square().sum() / n;
        const double sd = std::sqrt(var);
        s.scale(i) = sd > 1e-12 * std::max(1.0, std::abs(s.mean(i))) ? sd : 1.0;
    }
    return s;
}

// Raw-input parameters -> parameters acting on (x - mean) / scale.
void unfold(NetworkParams& params, const Standardization& s) {
    auto& first = params.layers.front();
    first.bias += first.weights * s.mean;
    first.weights = first.weights * s.scale.asDiagonal();
}

void fold(NetworkParams& params, const Standardization& s) {
    auto& first = params.layers.front();
    first.weights = first.weights * s.scale.cwiseInverse().asDiagonal();
    first.bias -= first.weights * s.mean;
}

// Fisher-Yates with a platform-independent bounded draw.
void shuffle(std::vector<Eigen::Index>& order, Rng& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * i) >> 64);
        std::swap(order[i - 1], order[j]);
    }
}

// Raw-output parameters -> parameters predicting (y - mean) / scale.
void unfold_output(NetworkParams& params, double mean, double scale) {
    auto& last = params.layers.back();
    last.weights /= scale;
    last.bias = (last.bias.array() - mean) / scale;
}

void fold_output(NetworkParams& params, double mean, double scale) {
    auto& last = params.layers.back();
    last.weights *= scale;
    last.bias = last.bias.array() * scale + mean;
}

double batch_mse(const NetworkParams& params, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                 const LeakyRelu& act) {
    return (forward_batch(params, inputs, act) - targets).squaredNorm() / static_cast<double>(targets.size());
}

}  // namespace

FitResult fit(const NetworkParams& initial, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
              const TrainConfig& config) {
    config.validate();
    const Eigen::Index n = inputs.cols();
    if (n < 1) throw std::invalid_argument("fit: empty training set");
    if (targets.size() != n) throw std::invalid_argument("fit: inputs and targets have different sizes");
    check_batch(initial, inputs);
    if (!inputs.allFinite() || !targets.allFinite()) throw std::invalid_argument("fit: non-finite training data");

    NetworkParams params = initial;
    Standardization standardization;
    Eigen::MatrixXd train_inputs;
    if (config.standardize_inputs) {
        standardization = column_statistics(inputs);
        train_inputs = (inputs.colwise() - standardization.mean).array().colwise() / standardization.scale.array();
        unfold(params, standardization);
    } else {
        train_inputs = inputs;
    }

    double target_mean = 0.0;
    double target_scale = 1.0;
    Eigen::VectorXd train_targets;
    if (config.standardize_targets) {
        target_mean = targets.mean();
        const double sd = std::sqrt((targets.array() - target_mean).square().mean());
        target_scale = sd > 1e-12 * std::max(1.0, std::abs(target_mean)) ? sd : 1.0;
        train_targets = (targets.array() - target_mean) / target_scale;
        unfold_output(params, target_mean, target_scale);
    } else {
        train_targets = targets;
    }
    const double mse_unit = target_scale * target_scale;

    FitResult result;
    result.report.samples = static_cast<std::size_t>(n);
    result.report.initial_mse = mse_unit * batch_mse(params, train_inputs, train_targets, config.activation);

    Rng rng(config.seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    AdamMoments moments = AdamMoments::zeros_like(params);
    const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, n);
    Eigen::MatrixXd batch_inputs(inputs.rows(), batch);
    Eigen::VectorXd batch_targets(batch);
    long step = 0;
    TrainConfig step_config = config;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        step_config.learning_rate = config.epoch_learning_rate(epoch);
        shuffle(order, rng);
        double loss_sum = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index size = std::min(batch, n - start);
            if (size != batch_inputs.cols()) {
                batch_inputs.resize(inputs.rows(), size);
                batch_targets.resize(size);
            }
            for (Eigen::Index k = 0; k < size; ++k) {
                const auto idx = order[static_cast<std::size_t>(start + k)];
                batch_inputs.col(k) = train_inputs.col(idx);
                batch_targets(k) = train_targets(idx);
            }
            const LossGradient lg = loss_and_gradient(params, batch_inputs, batch_targets, config.activation);
            if (!std::isfinite(lg.mse)) throw std::runtime_error("fit: training loss became non-finite");
            loss_sum += lg.mse * static_cast<double>(size);
            adam_step(params, lg.gradient, moments, ++step, step_config);
            if (size != batch) {
                batch_inputs.resize(inputs.rows(), batch);
                batch_targets.resize(batch);
            }
        }
        result.report.epoch_mse.push_back(mse_unit * loss_sum / static_cast<double>(n));
    }

    if (!params.all_finite()) throw std::runtime_error("fit: parameters became non-finite");
    result.report.final_mse = mse_unit * batch_mse(params, train_inputs, train_targets, config.activation);
    if (config.standardize_inputs) fold(params, standardization);
    if (config.standardize_targets) fold_output(params, target_mean, target_scale);
    result.params = std::move(params);
    return result;
}

void save_checkpoint(const std::filesystem::path& file, const NetworkParams& params) {
    nlohmann::json doc;
    doc["widths"] = params.shape().widths;
    doc["layers"] = nlohmann::json::array();
    for (const auto& layer : params.layers) {
        std::vector<double> weights;
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) weights.push_back(layer.weights(i, j));
        doc["layers"].push_back({{"weights", weights},
                                 {"bias", std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size())}});
    }
    std::ofstream out(file);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + file.string());
    out << doc.dump(1) << '\n';
}

NetworkParams load_checkpoint(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + file.string());
    const auto doc = nlohmann::json::parse(in);
    NetworkShape shape{doc.at("widths").get<std::vector<int>>()};
    NetworkParams params = NetworkParams::zeros(shape);
    const auto& layers = doc.at("layers");
    if (layers.size() != params.layers.size()) throw std::runtime_error("checkpoint: layer count mismatch");
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto weights = layers[l].at("weights").get<std::vector<double>>();
        const auto bias = layers[l].at("bias").get<std::vector<double>>();
        auto& layer = params.layers[l];
        if (weights.size() != static_cast<std::size_t>(layer.weights.size()) ||
            bias.size() != static_cast<std::size_t>(layer.bias.size()))
            throw std::runtime_error("checkpoint: layer " + std::to_string(l) + " has the wrong size");
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
            for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = weights[k++];
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias(i) = bias[i];
    }
    return params;
}

}  // namespace nnlsm

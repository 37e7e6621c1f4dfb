#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "nnlsm/neural_net.hpp"
#include "nnlsm/polynomial_regression.hpp"

namespace nnlsm {

/// Fitted approximation of the continuation value at one exercise date.
class ContinuationRegressor {
public:
    virtual ~ContinuationRegressor() = default;
    [[nodiscard]] virtual double predict(std::span<const double> state) const = 0;
    [[nodiscard]] virtual std::string_view kind() const noexcept = 0;
};

using RegressorPtr = std::shared_ptr<const ContinuationRegressor>;

struct RegressionFit {
    RegressorPtr regressor;
    double training_mse = 0.0;
};

/// Produces a regressor per date. `previous` is the most recent regressor fitted at a
/// later date (nullptr for the first fit); the neural factory warm-starts from it.
class RegressorFactory {
public:
    virtual ~RegressorFactory() = default;
    virtual RegressionFit fit(int date, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                              const ContinuationRegressor* previous) = 0;
};

class NeuralRegressor final : public ContinuationRegressor {
public:
    NeuralRegressor(NetworkParams params, LeakyRelu activation)
        : params_(std::move(params)), activation_(activation) {}

    [[nodiscard]] double predict(std::span<const double> state) const override {
        return forward(params_, state, activation_);
    }
    [[nodiscard]] std::string_view kind() const noexcept override { return "neural"; }
    [[nodiscard]] const NetworkParams& params() const noexcept { return params_; }

private:
    NetworkParams params_;
    LeakyRelu activation_;
};

class NeuralRegressorFactory final : public RegressorFactory {
public:
    /// `first_fit_epochs`, when set, replaces config.epochs for the first fitted date
    /// only (the one without a warm start).
    NeuralRegressorFactory(NetworkShape shape, TrainConfig config, std::optional<int> first_fit_epochs = {});

    RegressionFit fit(int date, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                      const ContinuationRegressor* previous) override;

private:
    NetworkShape shape_;
    TrainConfig config_;
    std::optional<int> first_fit_epochs_;
};

class PolynomialRegressor final : public ContinuationRegressor {
public:
    explicit PolynomialRegressor(LinearModel model) : model_(std::move(model)) {}

    [[nodiscard]] double predict(std::span<const double> state) const override { return nnlsm::predict(model_, state); }
    [[nodiscard]] std::string_view kind() const noexcept override { return "polynomial"; }
    [[nodiscard]] const LinearModel& model() const noexcept { return model_; }

private:
    LinearModel model_;
};

/// Refits a fresh least-squares model at every date.
class PolynomialRegressorFactory final : public RegressorFactory {
public:
    explicit PolynomialRegressorFactory(int degree, double ridge = 1e-10);

    RegressionFit fit(int date, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                      const ContinuationRegressor* previous) override;

private:
    int degree_;
    double ridge_;
};

/// Wraps an arbitrary function; used for scripted policies.
class FunctionRegressor final : public ContinuationRegressor {
public:
    explicit FunctionRegressor(std::function<double(std::span<const double>)> fn) : fn_(std::move(fn)) {}

    [[nodiscard]] double predict(std::span<const double> state) const override { return fn_(state); }
    [[nodiscard]] std::string_view kind() const noexcept override { return "function"; }

private:
    std::function<double(std::span<const double>)> fn_;
};

}  // namespace nnlsm

#include "nnlsm/regressors.hpp"

#include <cmath>
#include <stdexcept>

#include "nnlsm/rng.hpp"

namespace nnlsm {

NeuralRegressorFactory::NeuralRegressorFactory(NetworkShape shape, TrainConfig config,
                                               std::optional<int> first_fit_epochs)
    : shape_(std::move(shape)), config_(config), first_fit_epochs_(first_fit_epochs) {
    shape_.validate();
    config_.validate();
    if (first_fit_epochs_ && *first_fit_epochs_ < 1)
        throw std::invalid_argument("NeuralRegressorFactory: first_fit_epochs must be >= 1");
}

RegressionFit NeuralRegressorFactory::fit(int date, const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                          const ContinuationRegressor* previous) {
    TrainConfig config = config_;
    config.seed = derive_seed(config_.seed, static_cast<std::uint64_t>(date));

    NetworkParams start;
    const auto* warm = dynamic_cast<const NeuralRegressor*>(previous);
    if (warm != nullptr && warm->params().shape() == shape_) {
        start = warm->params();
    } else {
        start = init_params(shape_, derive_seed(config.seed, 0xA11CE));
        if (first_fit_epochs_) config.epochs = *first_fit_epochs_;
    }

    FitResult result = nnlsm::fit(start, inputs, targets, config);
    return {std::make_shared<NeuralRegressor>(std::move(result.params), config.activation), result.report.final_mse};
}

PolynomialRegressorFactory::PolynomialRegressorFactory(int degree, double ridge) : degree_(degree), ridge_(ridge) {
    if (degree < 0) throw std::invalid_argument("PolynomialRegressorFactory: degree must be >= 0");
}

RegressionFit PolynomialRegressorFactory::fit(int /*date*/, const Eigen::MatrixXd& inputs,
                                              const Eigen::VectorXd& targets, const ContinuationRegressor*) {
    auto basis = PolynomialBasis::make(static_cast<int>(inputs.rows()), degree_);
    LinearModel model = fit_least_squares(basis, inputs, targets, ridge_);

    double sse = 0.0;
    for (Eigen::Index m = 0; m < inputs.cols(); ++m) {
        const Eigen::VectorXd x = inputs.col(m);
        const double e = nnlsm::predict(model, {x.data(), static_cast<std::size_t>(x.size())}) - targets(m);
        sse += e * e;
    }
    return {std::make_shared<PolynomialRegressor>(std::move(model)), sse / static_cast<double>(inputs.cols())};
}

}  // namespace nnlsm

#pragma once

// Independent reference computations for the network tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nnlsm/neural_net.hpp"

namespace nnlsm::testing {

// Plain matrix composition A_L o act o ... o act o A_1, evaluated with Eigen.
inline double compose(const NetworkParams& p, const Eigen::VectorXd& x, double slope) {
    Eigen::VectorXd h = x;
    for (std::size_t l = 0; l < p.layers.size(); ++l) {
        h = p.layers[l].weights * h + p.layers[l].bias;
        if (l + 1 < p.layers.size()) h = h.unaryExpr([slope](double v) { return v >= 0.0 ? v : slope * v; });
    }
    return h(0);
}

inline double batch_loss(const NetworkParams& p, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double slope) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        const double r = compose(p, x.col(k), slope) - y(k);
        s += r * r;
    }
    return s / static_cast<double>(x.cols());
}

inline NetworkParams random_params(const NetworkShape& shape, std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    NetworkParams p = NetworkParams::zeros(shape);
    for (auto& layer : p.layers) {
        layer.weights = layer.weights.unaryExpr([&](double) { return u(gen); });
        layer.bias = layer.bias.unaryExpr([&](double) { return u(gen); });
    }
    return p;
}

inline Eigen::MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
    std::normal_distribution<double> n;
    return Eigen::MatrixXd::NullaryExpr(rows, cols, [&]() { return n(gen); });
}

// Loss in extended precision with one flat parameter shifted by `shift`, so that
// central differences are not swamped by double rounding.
inline long double shifted_loss(const NetworkParams& p, std::size_t index, long double shift,
                                const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double slope) {
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    std::vector<MatL> w;
    std::vector<VecL> b;
    std::size_t offset = 0;
    for (const auto& layer : p.layers) {
        MatL wl = layer.weights.cast<long double>();
        VecL bl = layer.bias.cast<long double>();
        const auto nw = static_cast<std::size_t>(wl.size());
        if (index >= offset && index < offset + nw) {
            const auto k = static_cast<Eigen::Index>(index - offset);
            wl(k / wl.cols(), k % wl.cols()) += shift;  // row-major flat order
        } else if (index >= offset + nw && index < offset + nw + static_cast<std::size_t>(bl.size())) {
            bl(static_cast<Eigen::Index>(index - offset - nw)) += shift;
        }
        offset += nw + static_cast<std::size_t>(bl.size());
        w.push_back(std::move(wl));
        b.push_back(std::move(bl));
    }
    const long double a = slope;
    long double sum = 0.0L;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
        VecL h = x.col(k).cast<long double>();
        for (std::size_t l = 0; l < w.size(); ++l) {
            h = w[l] * h + b[l];
            if (l + 1 < w.size()) h = h.unaryExpr([a](long double v) { return v >= 0.0L ? v : a * v; });
        }
        const long double r = h(0) - static_cast<long double>(y(k));
        sum += r * r;
    }
    return sum / static_cast<long double>(x.cols());
}

// Largest relative gap between the backprop gradient and central differences of the
// loss (step h). Entries whose magnitudes are both below `floor` are compared
// against `floor` instead.
inline double gradient_relative_error(const NetworkParams& params, const Eigen::MatrixXd& x,
                                      const Eigen::VectorXd& y, double slope, double h = 1e-6,
                                      double floor = 1e-6) {
    const std::vector<double> analytic = loss_and_gradient(params, x, y, LeakyRelu{slope}).gradient.flatten();
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const long double up = shifted_loss(params, i, h, x, y, slope);
        const long double down = shifted_loss(params, i, -h, x, y, slope);
        const double numeric = static_cast<double>((up - down) / (2.0L * h));
        const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), floor});
        worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
    }
    return worst;
}

}  // namespace nnlsm::testing

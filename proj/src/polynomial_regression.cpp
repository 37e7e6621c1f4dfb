#include "nnlsm/polynomial_regression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace nnlsm {

std::size_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::size_t result = 1;
    for (int i = 1; i <= k; ++i) result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return result;
}

namespace {

void enumerate_degree(int remaining, std::size_t position, std::vector<int>& alpha,
                      std::vector<std::vector<int>>& out) {
    if (position + 1 == alpha.size()) {
        alpha[position] = remaining;
        out.push_back(alpha);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        alpha[position] = e;
        enumerate_degree(remaining - e, position + 1, alpha, out);
    }
    alpha[position] = 0;
}

}  // namespace

PolynomialBasis PolynomialBasis::make(int input_dim, int degree) {
    if (input_dim < 1) throw std::invalid_argument("PolynomialBasis: input dimension must be >= 1");
    if (degree < 0) throw std::invalid_argument("PolynomialBasis: degree must be >= 0");
    PolynomialBasis basis{input_dim, degree, {}};
    std::vector<int> alpha(static_cast<std::size_t>(input_dim), 0);
    for (int k = 0; k <= degree; ++k) enumerate_degree(k, 0, alpha, basis.exponents);
    return basis;
}

std::vector<double> expand_features(const PolynomialBasis& basis, std::span<const double> x) {
    if (static_cast<int>(x.size()) != basis.input_dim)
        throw std::invalid_argument("expand_features: input dimension mismatch");
    // Power table x_j^k for k <= degree.
    const int q = basis.degree;
    std::vector<double> powers(x.size() * static_cast<std::size_t>(q + 1));
    for (std::size_t j = 0; j < x.size(); ++j) {
        double p = 1.0;
        for (int k = 0; k <= q; ++k) {
            powers[j * (q + 1) + k] = p;
            p *= x[j];
        }
    }
    std::vector<double> features(basis.size());
    for (std::size_t f = 0; f < basis.size(); ++f) {
        double v = 1.0;
        const auto& alpha = basis.exponents[f];
        for (std::size_t j = 0; j < alpha.size(); ++j)
            if (alpha[j] != 0) v *= powers[j * (q + 1) + alpha[j]];
        features[f] = v;
    }
    return features;
}

LinearModel LinearModel::raw(PolynomialBasis basis, Eigen::VectorXd coefficients) {
    if (static_cast<std::size_t>(coefficients.size()) != basis.size())
        throw std::invalid_argument("LinearModel: coefficient count does not match the basis");
    const int r = basis.input_dim;
    return {std::move(basis), std::move(coefficients), Eigen::VectorXd::Zero(r), Eigen::VectorXd::Ones(r)};
}

std::vector<double> LinearModel::raw_coefficients() const {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t f = 0; f < basis.size(); ++f) index.emplace(basis.exponents[f], f);

    std::vector<double> out(basis.size(), 0.0);
    const auto r = static_cast<std::size_t>(basis.input_dim);
    for (std::size_t f = 0; f < basis.size(); ++f) {
        if (coefficients(f) == 0.0) continue;
        const auto& alpha = basis.exponents[f];
        // prod_j ((x_j - mu_j) / s_j)^{alpha_j} = prod_j sum_k C(alpha_j, k) x_j^k (-mu_j)^{alpha_j - k} / s_j^{alpha_j}
        std::vector<int> beta(r, 0);
        while (true) {
            double term = coefficients(f);
            for (std::size_t j = 0; j < r; ++j) {
                term *= static_cast<double>(binomial(alpha[j], beta[j])) *
                        std::pow(-input_mean(j), alpha[j] - beta[j]) / std::pow(input_scale(j), alpha[j]);
            }
            out[index.at(beta)] += term;
            std::size_t j = 0;
            while (j < r && beta[j] == alpha[j]) beta[j++] = 0;
            if (j == r) break;
            ++beta[j];
        }
    }
    return out;
}

double predict(const LinearModel& model, std::span<const double> x) {
    const auto r = static_cast<std::size_t>(model.basis.input_dim);
    if (x.size() != r) throw std::invalid_argument("predict: input dimension mismatch");
    std::vector<double> z(r);
    for (std::size_t j = 0; j < r; ++j) z[j] = (x[j] - model.input_mean(j)) / model.input_scale(j);
    const auto features = expand_features(model.basis, z);
    double s = 0.0;
    for (std::size_t f = 0; f < features.size(); ++f) s += model.coefficients(f) * features[f];
    return s;
}

LinearModel fit_least_squares(const PolynomialBasis& basis, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets, double ridge) {
    const Eigen::Index n = inputs.cols();
    const Eigen::Index r = inputs.rows();
    if (r != basis.input_dim) throw std::invalid_argument("fit_least_squares: input dimension mismatch");
    if (n < 1) throw std::invalid_argument("fit_least_squares: empty training set");
    if (targets.size() != n) throw std::invalid_argument("fit_least_squares: inputs and targets differ in size");
    if (!inputs.allFinite() || !targets.allFinite())
        throw std::invalid_argument("fit_least_squares: non-finite training data");
    if (!(ridge >= 0.0)) throw std::invalid_argument("fit_least_squares: ridge must be >= 0");

    LinearModel model;
    model.basis = basis;
    model.input_mean = inputs.rowwise().mean();
    model.input_scale.resize(r);
    for (Eigen::Index j = 0; j < r; ++j) {
        const double sd = std::sqrt((inputs.row(j).array() - model.input_mean(j)).square().mean());
        model.input_scale(j) = sd > 1e-12 * std::max(1.0, std::abs(model.input_mean(j))) ? sd : 1.0;
    }

    const auto p = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd design(n + p, p);
    std::vector<double> z(static_cast<std::size_t>(r));
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index j = 0; j < r; ++j) z[j] = (inputs(j, m) - model.input_mean(j)) / model.input_scale(j);
        const auto features = expand_features(basis, z);
        for (Eigen::Index f = 0; f < p; ++f) design(m, f) = features[f];
    }

    // Centre and scale every non-constant column; the constant column stays 1.
    Eigen::VectorXd col_mean = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(p);
    for (Eigen::Index f = 1; f < p; ++f) {
        auto col = design.col(f).head(n);
        col_mean(f) = col.mean();
        const double sd = std::sqrt((col.array() - col_mean(f)).square().mean());
        col_scale(f) = sd > 1e-12 * std::max(1.0, std::abs(col_mean(f))) ? sd : 1.0;
        col = (col.array() - col_mean(f)) / col_scale(f);
    }
    design.bottomRows(p).setZero();
    design.bottomRows(p).diagonal().setConstant(std::sqrt(ridge));

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + p);
    rhs.head(n) = targets;
    // Without a ridge the system may be rank deficient; fall back to pivoting.
    const Eigen::VectorXd solution =
        ridge > 0.0 ? Eigen::VectorXd(design.householderQr().solve(rhs))
                    : Eigen::VectorXd(design.colPivHouseholderQr().solve(rhs));

    model.coefficients.resize(p);
    model.coefficients(0) = solution(0);
    for (Eigen::Index f = 1; f < p; ++f) {
        model.coefficients(f) = solution(f) / col_scale(f);
        model.coefficients(0) -= model.coefficients(f) * col_mean(f);
    }
    return model;
}

}  // namespace nnlsm

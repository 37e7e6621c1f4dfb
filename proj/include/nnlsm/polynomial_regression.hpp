#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nnlsm {

std::size_t binomial(int n, int k);

/// All monomials x^alpha with |alpha| <= degree in graded-lexicographic order:
/// by total degree first, then by decreasing exponent of x_1, x_2, ...
/// For r = 2, q = 2: 1, x1, x2, x1^2, x1 x2, x2^2.
struct PolynomialBasis {
    int input_dim = 1;
    int degree = 0;
    std::vector<std::vector<int>> exponents;

    static PolynomialBasis make(int input_dim, int degree);

    [[nodiscard]] std::size_t size() const noexcept { return exponents.size(); }
};

std::vector<double> expand_features(const PolynomialBasis& basis, std::span<const double> x);

/// c . phi((x - mean) / scale). The fit standardizes inputs, so coefficients act on
/// standardized coordinates; raw_coefficients() expands them back onto monomials of x.
struct LinearModel {
    PolynomialBasis basis;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd input_mean;
    Eigen::VectorXd input_scale;

    /// Model acting directly on raw inputs (zero mean, unit scale).
    static LinearModel raw(PolynomialBasis basis, Eigen::VectorXd coefficients);

    [[nodiscard]] std::vector<double> raw_coefficients() const;
};

double predict(const LinearModel& model, std::span<const double> x);

/// Minimizes sum (c . phi(x_m) - y_m)^2 + ridge |c|^2 over the columns of `inputs`
/// (r x B) with a Householder QR of the ridge-augmented, column-standardized system.
LinearModel fit_least_squares(const PolynomialBasis& basis, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets, double ridge = 1e-10);

}  // namespace nnlsm

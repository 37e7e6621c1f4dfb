#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnlsm/grid.hpp"
#include "nnlsm/path_set.hpp"

namespace nnlsm {

enum class PayoffKind {
    put_1d,         // (K - S)_+
    basket_put,     // (K - sum_i w_i S^i)_+
    max_call,       // (max_i S^i - K)_+
    max_put,        // (K - max_i S^i)_+
    geometric_put,  // (K - (prod_j S^j)^{1/d})_+
    heston_put,     // (K - S)_+ on the first component of (S, variance)
};

std::string_view to_string(PayoffKind kind) noexcept;
PayoffKind payoff_kind_from_string(std::string_view name);

struct PayoffSpec {
    PayoffKind kind = PayoffKind::put_1d;
    double strike = 100.0;
    std::vector<double> weights;  // basket_put only

    void validate() const;

    /// Throws std::invalid_argument if the payoff cannot read a state of this dimension.
    void check_state_dim(std::size_t dim) const;

    /// Undiscounted payoff of a single state.
    [[nodiscard]] double operator()(std::span<const double> state) const;
};

/// Fills Z[m][n] = exp(-rate * T_n) * payoff(X[m][n]) on every path and date.
void evaluate_payoffs(PathSet& paths, const PayoffSpec& payoff, const ExerciseGrid& grid, double rate);

}  // namespace nnlsm

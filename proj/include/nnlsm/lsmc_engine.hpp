#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nnlsm/path_set.hpp"
#include "nnlsm/regressors.hpp"

namespace nnlsm {

struct DateDiagnostics {
    std::size_t in_the_money = 0;
    bool fitted = false;
    double training_mse = 0.0;
};

/// Output of the backward policy recursion. Vectors indexed by date have N + 1
/// entries; regressors[n] is only meaningful for 1 <= n <= N-1 and is null when the
/// in-the-money set at date n was empty (all paths continue there).
struct BackwardResult {
    std::vector<RegressorPtr> regressors;
    std::vector<int> stop;            // stopping date index per path, in [1, N]
    std::vector<double> cash_flow;    // Z[m][stop[m]]
    std::vector<DateDiagnostics> diagnostics;

    [[nodiscard]] int dates_count() const noexcept { return static_cast<int>(regressors.size()) - 1; }
    /// Fraction of paths stopping at each date 0..N.
    [[nodiscard]] std::vector<double> exercise_fraction() const;
};

struct PriceEstimate {
    double price = 0.0;
    double continuation_mean = 0.0;
    double immediate_value = 0.0;
    double standard_error = 0.0;
};

/// Exercise rule shared by the engine and the cascade: stop on an in-the-money
/// path when the discounted payoff is at least the predicted continuation value.
inline bool exercises(double payoff, const ContinuationRegressor* regressor, std::span<const double> state) {
    return payoff > 0.0 && regressor != nullptr && payoff >= regressor->predict(state);
}

/// Longstaff-Schwartz backward recursion. At each date N-1, ..., 1 the factory is fit
/// on in-the-money paths only, with the pathwise cash flows of the current policy as
/// targets. Paths must carry discounted payoffs.
BackwardResult backward_induction(const PathSet& paths, RegressorFactory& factory, int threads = 1);

/// Date index where the fixed policy `regressors` stops on `path` when started at
/// date `start` (1 <= start <= N). Reads no data before `start`.
int cascade_stop(std::span<const RegressorPtr> regressors, const PathView& path, int start);

/// F_start: discounted payoff collected by the policy from date `start` on.
double cascade_payoff(std::span<const RegressorPtr> regressors, const PathView& path, int start);

/// max(Z_0, mean cash flow), with the standard error of the mean as a diagnostic.
PriceEstimate price_at_zero(const BackwardResult& result, double immediate_value);
PriceEstimate price_at_zero(std::span<const double> cash_flows, double immediate_value);

/// Prices a frozen policy on a (typically independent) path set.
PriceEstimate price_with_policy(std::span<const RegressorPtr> regressors, const PathSet& paths);

struct FlipGap {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the perturbation bound
///   |F_n(a) - F_n(b)| <= (sum_{i>=n} |Z_i|) * #{i in [n, N-1] : |Z_i - b_i(X_i)| <= |a_i(X_i) - b_i(X_i)|}
/// on every path. A missing regressor on either side counts as a possible flip.
std::vector<FlipGap> lemma_flip_gap(std::span<const RegressorPtr> regressors_a,
                                    std::span<const RegressorPtr> regressors_b, const PathSet& paths, int start);

}  // namespace nnlsm

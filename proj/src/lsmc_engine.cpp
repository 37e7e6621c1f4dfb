#include "nnlsm/lsmc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nnlsm/parallel.hpp"

namespace nnlsm {

std::vector<double> BackwardResult::exercise_fraction() const {
    std::vector<double> fraction(regressors.size(), 0.0);
    if (stop.empty()) return fraction;
    for (int s : stop) fraction[static_cast<std::size_t>(s)] += 1.0;
    for (double& f : fraction) f /= static_cast<double>(stop.size());
    return fraction;
}

BackwardResult backward_induction(const PathSet& paths, RegressorFactory& factory, int threads) {
    const std::size_t m_count = paths.paths();
    if (paths.dates() < 2) throw std::invalid_argument("backward_induction: need at least one exercise date");
    if (m_count < 1) throw std::invalid_argument("backward_induction: empty path set");
    const int n_last = static_cast<int>(paths.dates()) - 1;
    const auto dim = static_cast<Eigen::Index>(paths.dim());

    BackwardResult result;
    result.regressors.assign(static_cast<std::size_t>(n_last) + 1, nullptr);
    result.diagnostics.assign(static_cast<std::size_t>(n_last) + 1, {});
    result.stop.assign(m_count, n_last);
    result.cash_flow.resize(m_count);
    for (std::size_t m = 0; m < m_count; ++m) result.cash_flow[m] = paths.payoff(m, n_last);

    const ContinuationRegressor* previous = nullptr;
    std::vector<std::size_t> itm;
    itm.reserve(m_count);
    for (int n = n_last - 1; n >= 1; --n) {
        itm.clear();
        for (std::size_t m = 0; m < m_count; ++m)
            if (paths.payoff(m, n) > 0.0) itm.push_back(m);
        auto& diag = result.diagnostics[n];
        diag.in_the_money = itm.size();
        if (itm.empty()) continue;

        Eigen::MatrixXd inputs(dim, static_cast<Eigen::Index>(itm.size()));
        Eigen::VectorXd targets(static_cast<Eigen::Index>(itm.size()));
        for (std::size_t k = 0; k < itm.size(); ++k) {
            const auto x = paths.state(itm[k], n);
            for (Eigen::Index j = 0; j < dim; ++j) inputs(j, static_cast<Eigen::Index>(k)) = x[j];
            targets(static_cast<Eigen::Index>(k)) = result.cash_flow[itm[k]];
        }

        RegressionFit fit;
        try {
            fit = factory.fit(n, inputs, targets, previous);
        } catch (const std::exception& e) {
            throw std::runtime_error("backward_induction: fit failed at date " + std::to_string(n) + ": " + e.what());
        }
        diag.fitted = true;
        diag.training_mse = fit.training_mse;
        result.regressors[n] = fit.regressor;
        previous = fit.regressor.get();

        const ContinuationRegressor* regressor = fit.regressor.get();
        parallel_for(itm.size(), threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                const std::size_t m = itm[k];
                const double z = paths.payoff(m, n);
                if (exercises(z, regressor, paths.state(m, n))) {
                    result.stop[m] = n;
                    result.cash_flow[m] = z;
                }
            }
        });
    }
    return result;
}

int cascade_stop(std::span<const RegressorPtr> regressors, const PathView& path, int start) {
    const int n_last = static_cast<int>(path.last_date());
    if (start < 1 || start > n_last) throw std::invalid_argument("cascade_stop: start date out of range");
    if (regressors.size() < static_cast<std::size_t>(n_last))
        throw std::invalid_argument("cascade_stop: regressor stack shorter than the grid");
    for (int n = start; n < n_last; ++n) {
        if (exercises(path.payoffs[n], regressors[n].get(), path.state(n))) return n;
    }
    return n_last;
}

double cascade_payoff(std::span<const RegressorPtr> regressors, const PathView& path, int start) {
    return path.payoffs[static_cast<std::size_t>(cascade_stop(regressors, path, start))];
}

PriceEstimate price_at_zero(std::span<const double> cash_flows, double immediate_value) {
    PriceEstimate out;
    out.immediate_value = immediate_value;
    const double m = static_cast<double>(cash_flows.size());
    if (cash_flows.empty()) {
        out.price = immediate_value;
        return out;
    }
    double sum = 0.0;
    for (double c : cash_flows) sum += c;
    out.continuation_mean = sum / m;
    double sq = 0.0;
    for (double c : cash_flows) sq += (c - out.continuation_mean) * (c - out.continuation_mean);
    if (cash_flows.size() > 1) out.standard_error = std::sqrt(sq / (m - 1.0)) / std::sqrt(m);
    out.price = std::max(immediate_value, out.continuation_mean);
    return out;
}

PriceEstimate price_at_zero(const BackwardResult& result, double immediate_value) {
    return price_at_zero(std::span<const double>(result.cash_flow), immediate_value);
}

PriceEstimate price_with_policy(std::span<const RegressorPtr> regressors, const PathSet& paths) {
    std::vector<double> cash(paths.paths());
    for (std::size_t m = 0; m < paths.paths(); ++m) cash[m] = cascade_payoff(regressors, paths.path(m), 1);
    return price_at_zero(cash, paths.payoff(0, 0));
}

std::vector<FlipGap> lemma_flip_gap(std::span<const RegressorPtr> regressors_a,
                                    std::span<const RegressorPtr> regressors_b, const PathSet& paths, int start) {
    const int n_last = static_cast<int>(paths.dates()) - 1;
    std::vector<FlipGap> out(paths.paths());
    for (std::size_t m = 0; m < paths.paths(); ++m) {
        const PathView path = paths.path(m);
        const double fa = cascade_payoff(regressors_a, path, start);
        const double fb = cascade_payoff(regressors_b, path, start);

        double payoff_sum = 0.0;
        for (int i = start; i <= n_last; ++i) payoff_sum += std::abs(path.payoffs[i]);
        int near_flips = 0;
        for (int i = start; i < n_last; ++i) {
            const auto* a = regressors_a[i].get();
            const auto* b = regressors_b[i].get();
            if (a == nullptr && b == nullptr) continue;
            if (a == nullptr || b == nullptr) {
                ++near_flips;
                continue;
            }
            const auto x = path.state(i);
            const double pb = b->predict(x);
            if (std::abs(path.payoffs[i] - pb) <= std::abs(a->predict(x) - pb)) ++near_flips;
        }
        out[m] = {std::abs(fa - fb), payoff_sum * near_flips};
    }
    return out;
}

}  // namespace nnlsm

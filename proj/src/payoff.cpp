#include "nnlsm/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nnlsm {

std::string_view to_string(PayoffKind kind) noexcept {
    switch (kind) {
        case PayoffKind::put_1d: return "put_1d";
        case PayoffKind::basket_put: return "basket_put";
        case PayoffKind::max_call: return "max_call";
        case PayoffKind::max_put: return "max_put";
        case PayoffKind::geometric_put: return "geometric_put";
        case PayoffKind::heston_put: return "heston_put";
    }
    return "unknown";
}

PayoffKind payoff_kind_from_string(std::string_view name) {
    for (auto kind : {PayoffKind::put_1d, PayoffKind::basket_put, PayoffKind::max_call,
                      PayoffKind::max_put, PayoffKind::geometric_put, PayoffKind::heston_put}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown payoff kind '" + std::string(name) + "'");
}

void PayoffSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) throw std::invalid_argument("PayoffSpec: strike must be > 0");
    if (kind == PayoffKind::basket_put) {
        if (weights.empty()) throw std::invalid_argument("PayoffSpec: basket_put needs weights");
        for (double w : weights)
            if (!std::isfinite(w)) throw std::invalid_argument("PayoffSpec: weights must be finite");
    }
}

void PayoffSpec::check_state_dim(std::size_t dim) const {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("PayoffSpec: " + std::string(to_string(kind)) + " " + what +
                                    ", got state dimension " + std::to_string(dim));
    };
    switch (kind) {
        case PayoffKind::put_1d:
            if (dim != 1) fail("needs a 1-d state");
            break;
        case PayoffKind::heston_put:
            if (dim != 2) fail("needs a (S, variance) state");
            break;
        case PayoffKind::basket_put:
            if (dim != weights.size()) fail("has " + std::to_string(weights.size()) + " weights");
            break;
        default:
            if (dim < 1) fail("needs at least one asset");
    }
}

double PayoffSpec::operator()(std::span<const double> s) const {
    switch (kind) {
        case PayoffKind::put_1d:
        case PayoffKind::heston_put:
            return std::max(strike - s[0], 0.0);
        case PayoffKind::basket_put: {
            double basket = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) basket += weights[i] * s[i];
            return std::max(strike - basket, 0.0);
        }
        case PayoffKind::max_call:
            return std::max(*std::max_element(s.begin(), s.end()) - strike, 0.0);
        case PayoffKind::max_put:
            return std::max(strike - *std::max_element(s.begin(), s.end()), 0.0);
        case PayoffKind::geometric_put: {
            double log_sum = 0.0;
            for (double v : s) log_sum += std::log(v);
            return std::max(strike - std::exp(log_sum / static_cast<double>(s.size())), 0.0);
        }
    }
    return 0.0;
}

void evaluate_payoffs(PathSet& paths, const PayoffSpec& payoff, const ExerciseGrid& grid, double rate) {
    payoff.validate();
    payoff.check_state_dim(paths.dim());
    if (paths.dates() != grid.dates.size())
        throw std::invalid_argument("evaluate_payoffs: path set and grid disagree on the number of dates");

    std::vector<double> discount(grid.dates.size());
    for (std::size_t n = 0; n < discount.size(); ++n) discount[n] = std::exp(-rate * grid.dates[n]);

    for (std::size_t m = 0; m < paths.paths(); ++m) {
        for (std::size_t n = 0; n < paths.dates(); ++n) {
            paths.payoff(m, n) = discount[n] * payoff(paths.state(m, n));
        }
    }
}

}  // namespace nnlsm

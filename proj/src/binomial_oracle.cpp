#include "nnlsm/binomial_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nnlsm/rng.hpp"

namespace nnlsm {

void TreeSpec::validate() const {
    if (steps < 1) throw std::invalid_argument("TreeSpec: steps must be >= 1");
    if (!(spot > 0.0) || !(strike > 0.0)) throw std::invalid_argument("TreeSpec: spot and strike must be > 0");
    if (!(volatility > 0.0)) throw std::invalid_argument("TreeSpec: volatility must be > 0");
    if (!(maturity > 0.0)) throw std::invalid_argument("TreeSpec: maturity must be > 0");
    for (double t : exercise_dates)
        if (!(t >= 0.0 && t <= maturity)) throw std::invalid_argument("TreeSpec: exercise date outside [0, T]");
}

double crr_bermudan_price(const TreeSpec& spec) {
    spec.validate();
    const int steps = spec.steps;
    const double dt = spec.maturity / steps;
    const double log_u = spec.volatility * std::sqrt(dt);
    const double u = std::exp(log_u);
    const double d = 1.0 / u;
    const double p = (std::exp((spec.rate - spec.dividend) * dt) - d) / (u - d);
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("crr_bermudan_price: risk-neutral probability outside [0, 1]; use more steps");
    const double disc = std::exp(-spec.rate * dt);
    const double up = disc * p;
    const double down = disc * (1.0 - p);

    std::vector<char> exercisable(static_cast<std::size_t>(steps) + 1, 0);
    for (double t : spec.exercise_dates) exercisable[static_cast<std::size_t>(std::llround(t / dt))] = 1;

    auto payoff = [&](int level, int j) {
        return std::max(spec.strike - spec.spot * std::exp((2.0 * j - level) * log_u), 0.0);
    };

    std::vector<double> values(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) values[j] = payoff(steps, j);

    double* v = values.data();
    for (int level = steps - 1; level >= 0; --level) {
        for (int j = 0; j <= level; ++j) v[j] = down * v[j] + up * v[j + 1];
        if (exercisable[level]) {
            for (int j = 0; j <= level; ++j) v[j] = std::max(v[j], payoff(level, j));
        }
    }
    return values[0];
}

namespace {

struct D12 {
    double d1;
    double d2;
};

D12 d_terms(double spot, double strike, double vol, double dividend, double rate, double maturity) {
    const double sd = vol * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate - dividend + 0.5 * vol * vol) * maturity) / sd;
    return {d1, d1 - sd};
}

}  // namespace

double bs_european_put(double spot, double strike, double volatility, double dividend, double rate,
                       double maturity) {
    if (volatility <= 0.0 || maturity <= 0.0) {
        const double forward = spot * std::exp((rate - dividend) * maturity);
        return std::exp(-rate * maturity) * std::max(strike - forward, 0.0);
    }
    const auto [d1, d2] = d_terms(spot, strike, volatility, dividend, rate, maturity);
    return strike * std::exp(-rate * maturity) * normal_cdf(-d2) - spot * std::exp(-dividend * maturity) * normal_cdf(-d1);
}

double bs_european_call(double spot, double strike, double volatility, double dividend, double rate,
                        double maturity) {
    if (volatility <= 0.0 || maturity <= 0.0) {
        const double forward = spot * std::exp((rate - dividend) * maturity);
        return std::exp(-rate * maturity) * std::max(forward - strike, 0.0);
    }
    const auto [d1, d2] = d_terms(spot, strike, volatility, dividend, rate, maturity);
    return spot * std::exp(-dividend * maturity) * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

}  // namespace nnlsm

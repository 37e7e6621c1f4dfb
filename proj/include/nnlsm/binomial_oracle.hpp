#pragma once

#include <vector>

namespace nnlsm {

/// One-dimensional put on a Cox-Ross-Rubinstein lattice with continuous dividend
/// yield, exercisable only at `exercise_dates` (plus maturity, always).
struct TreeSpec {
    int steps = 1000;
    double spot = 100.0;
    double volatility = 0.2;
    double dividend = 0.0;
    double rate = 0.0;
    double strike = 100.0;
    double maturity = 1.0;
    std::vector<double> exercise_dates;

    void validate() const;
};

/// Backward induction applying the exercise test only at the lattice levels nearest
/// each exercise date. Throws std::domain_error if the risk-neutral probability is
/// outside [0, 1].
double crr_bermudan_price(const TreeSpec& spec);

/// Black-Scholes prices with continuous dividend yield; sigma = 0 or T = 0 give the
/// deterministic limits.
double bs_european_put(double spot, double strike, double volatility, double dividend, double rate,
                       double maturity);
double bs_european_call(double spot, double strike, double volatility, double dividend, double rate,
                        double maturity);

}  // namespace nnlsm

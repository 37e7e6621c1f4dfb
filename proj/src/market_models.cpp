#include "nnlsm/market_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nnlsm/parallel.hpp"
#include "nnlsm/rng.hpp"

namespace nnlsm {

ExerciseGrid ExerciseGrid::uniform(double maturity, int dates_count, int substeps_per_interval) {
    if (dates_count < 1) throw std::invalid_argument("ExerciseGrid: need at least one exercise date");
    ExerciseGrid grid;
    grid.maturity = maturity;
    grid.substeps_per_interval = substeps_per_interval;
    grid.dates.resize(static_cast<std::size_t>(dates_count) + 1);
    for (int n = 0; n <= dates_count; ++n) grid.dates[n] = maturity * n / dates_count;
    grid.dates.back() = maturity;
    grid.validate();
    return grid;
}

ExerciseGrid ExerciseGrid::uniform_with_step_rate(double maturity, int dates_count,
                                                  double steps_per_year) {
    if (!(steps_per_year > 0.0)) throw std::invalid_argument("ExerciseGrid: steps_per_year must be positive");
    const double interval = maturity / dates_count;
    const int substeps = std::max(1, static_cast<int>(std::lround(interval * steps_per_year)));
    return uniform(maturity, dates_count, substeps);
}

void ExerciseGrid::validate() const {
    if (dates.size() < 2) throw std::invalid_argument("ExerciseGrid: need at least one exercise date");
    if (dates.front() != 0.0) throw std::invalid_argument("ExerciseGrid: first date must be 0");
    for (std::size_t n = 1; n < dates.size(); ++n) {
        if (!(dates[n] > dates[n - 1]))
            throw std::invalid_argument("ExerciseGrid: dates must be strictly increasing");
    }
    if (dates.back() != maturity) throw std::invalid_argument("ExerciseGrid: last date must equal maturity");
    if (substeps_per_interval < 1) throw std::invalid_argument("ExerciseGrid: substeps_per_interval must be >= 1");
}

BlackScholesSpec BlackScholesSpec::uniform(int dim, double spot, double volatility, double dividend,
                                           double rate, double correlation) {
    BlackScholesSpec spec;
    spec.spot.assign(dim, spot);
    spec.volatility.assign(dim, volatility);
    spec.dividend.assign(dim, dividend);
    spec.rate = rate;
    spec.correlation = correlation;
    return spec;
}

namespace {

void check_correlation(int dim, double rho) {
    if (dim < 1) throw std::invalid_argument("BlackScholesSpec: dimension must be >= 1");
    if (dim == 1) return;
    const double lower = -1.0 / (dim - 1);
    if (!(rho > lower && rho <= 1.0)) {
        throw std::invalid_argument("BlackScholesSpec: correlation " + std::to_string(rho) +
                                    " outside (" + std::to_string(lower) + ", 1]");
    }
}

}  // namespace

void BlackScholesSpec::validate() const {
    const auto d = spot.size();
    if (d == 0) throw std::invalid_argument("BlackScholesSpec: dimension must be >= 1");
    if (volatility.size() != d || dividend.size() != d)
        throw std::invalid_argument("BlackScholesSpec: spot, volatility and dividend sizes differ");
    for (std::size_t j = 0; j < d; ++j) {
        // sigma = 0 is accepted as the deterministic limit.
        if (!(volatility[j] >= 0.0)) throw std::invalid_argument("BlackScholesSpec: volatility must be >= 0");
        if (!(spot[j] > 0.0)) throw std::invalid_argument("BlackScholesSpec: spot must be > 0");
        if (!std::isfinite(dividend[j])) throw std::invalid_argument("BlackScholesSpec: dividend not finite");
    }
    if (!std::isfinite(rate)) throw std::invalid_argument("BlackScholesSpec: rate not finite");
    check_correlation(static_cast<int>(d), correlation);
}

void HestonSpec::validate() const {
    if (!(spot > 0.0)) throw std::invalid_argument("HestonSpec: spot must be > 0");
    if (!(initial_variance >= 0.0)) throw std::invalid_argument("HestonSpec: initial variance must be >= 0");
    if (!(long_run_variance >= 0.0)) throw std::invalid_argument("HestonSpec: long-run variance must be >= 0");
    if (!(mean_reversion >= 0.0)) throw std::invalid_argument("HestonSpec: mean reversion must be >= 0");
    if (!(vol_of_vol >= 0.0)) throw std::invalid_argument("HestonSpec: vol of vol must be >= 0");
    if (!(std::abs(correlation) <= 1.0)) throw std::invalid_argument("HestonSpec: |correlation| must be <= 1");
    if (!std::isfinite(rate)) throw std::invalid_argument("HestonSpec: rate not finite");
}

Eigen::MatrixXd correlation_matrix(int dim, double rho) {
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Constant(dim, dim, rho);
    gamma.diagonal().setOnes();
    return gamma;
}

Eigen::MatrixXd build_correlation_root(const BlackScholesSpec& spec) {
    const int d = spec.dim();
    check_correlation(d, spec.correlation);
    const Eigen::MatrixXd gamma = correlation_matrix(d, spec.correlation);

    // Cholesky that tolerates the positive semidefinite limit: a vanishing pivot
    // zeroes its column instead of failing.
    Eigen::MatrixXd root = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        double pivot = gamma(j, j);
        for (int k = 0; k < j; ++k) pivot -= root(j, k) * root(j, k);
        if (pivot <= 1e-14) continue;
        const double diag = std::sqrt(pivot);
        root(j, j) = diag;
        for (int i = j + 1; i < d; ++i) {
            double s = gamma(i, j);
            for (int k = 0; k < j; ++k) s -= root(i, k) * root(j, k);
            root(i, j) = s / diag;
        }
    }
    return root;
}

PathSet simulate_black_scholes(const BlackScholesSpec& spec, const ExerciseGrid& grid,
                               std::size_t paths, std::uint64_t seed, int threads) {
    spec.validate();
    grid.validate();
    if (paths < 1) throw std::invalid_argument("simulate_black_scholes: need at least one path");

    const int d = spec.dim();
    const int n_dates = grid.dates_count();
    const Eigen::MatrixXd root = build_correlation_root(spec);

    // Per-interval drift and per-component diffusion scale.
    std::vector<double> drift(static_cast<std::size_t>(n_dates) * d);
    std::vector<double> scale(static_cast<std::size_t>(n_dates) * d);
    for (int n = 0; n < n_dates; ++n) {
        const double dt = grid.dates[n + 1] - grid.dates[n];
        for (int j = 0; j < d; ++j) {
            const double sigma = spec.volatility[j];
            drift[n * d + j] = (spec.rate - spec.dividend[j] - 0.5 * sigma * sigma) * dt;
            scale[n * d + j] = sigma * std::sqrt(dt);
        }
    }

    PathSet out(paths, static_cast<std::size_t>(n_dates) + 1, static_cast<std::size_t>(d));
    parallel_for(paths, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> gauss(d);
        std::vector<double> log_s(d);
        for (std::size_t m = begin; m < end; ++m) {
            Rng rng(derive_seed(seed, m));
            auto s0 = out.state(m, 0);
            for (int j = 0; j < d; ++j) {
                s0[j] = spec.spot[j];
                log_s[j] = std::log(spec.spot[j]);
            }
            for (int n = 0; n < n_dates; ++n) {
                for (int j = 0; j < d; ++j) gauss[j] = rng.normal();
                auto s = out.state(m, n + 1);
                for (int j = 0; j < d; ++j) {
                    double correlated = 0.0;
                    for (int k = 0; k <= j; ++k) correlated += root(j, k) * gauss[k];
                    log_s[j] += drift[n * d + j] + scale[n * d + j] * correlated;
                    s[j] = std::exp(log_s[j]);
                }
            }
        }
    });
    return out;
}

PathSet simulate_heston(const HestonSpec& spec, const ExerciseGrid& grid, std::size_t paths,
                        std::uint64_t seed, int threads) {
    spec.validate();
    grid.validate();
    if (paths < 1) throw std::invalid_argument("simulate_heston: need at least one path");

    const int n_dates = grid.dates_count();
    const int substeps = grid.substeps_per_interval;
    const double rho = spec.correlation;
    const double rho_bar = std::sqrt(std::max(0.0, 1.0 - rho * rho));

    PathSet out(paths, static_cast<std::size_t>(n_dates) + 1, 2);
    parallel_for(paths, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
            Rng rng(derive_seed(seed, m));
            double log_s = std::log(spec.spot);
            double v = spec.initial_variance;
            auto x0 = out.state(m, 0);
            x0[0] = spec.spot;
            x0[1] = v;
            for (int n = 0; n < n_dates; ++n) {
                const double dt = (grid.dates[n + 1] - grid.dates[n]) / substeps;
                const double sqrt_dt = std::sqrt(dt);
                for (int k = 0; k < substeps; ++k) {
                    const double g1 = rng.normal();
                    const double g2 = rng.normal();
                    const double v_plus = std::max(v, 0.0);
                    const double vol = std::sqrt(v_plus);
                    log_s += (spec.rate - 0.5 * v_plus) * dt + vol * sqrt_dt * (rho * g1 + rho_bar * g2);
                    v += spec.mean_reversion * (spec.long_run_variance - v) * dt +
                         spec.vol_of_vol * vol * sqrt_dt * g1;
                }
                auto x = out.state(m, n + 1);
                x[0] = std::exp(log_s);
                x[1] = v;
            }
        }
    });
    return out;
}

GeometricReduction reduce_geometric_to_1d(const BlackScholesSpec& spec) {
    spec.validate();
    const int d = spec.dim();
    const Eigen::Map<const Eigen::VectorXd> sigma(spec.volatility.data(), d);
    const Eigen::MatrixXd gamma = correlation_matrix(d, spec.correlation);

    double log_spot = 0.0;
    double drift_sum = 0.0;
    for (int j = 0; j < d; ++j) {
        log_spot += std::log(spec.spot[j]);
        drift_sum += spec.dividend[j] + 0.5 * spec.volatility[j] * spec.volatility[j];
    }
    const double vol = std::sqrt(sigma.dot(gamma * sigma)) / d;
    return {std::exp(log_spot / d), vol, drift_sum / d - 0.5 * vol * vol};
}

}  // namespace nnlsm

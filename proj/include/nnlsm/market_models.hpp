#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nnlsm/grid.hpp"
#include "nnlsm/path_set.hpp"

namespace nnlsm {

/// Multi-asset Black-Scholes model with constant rate, continuous dividend
/// yields and an equicorrelated Brownian driver.
struct BlackScholesSpec {
    std::vector<double> spot;
    std::vector<double> volatility;
    std::vector<double> dividend;
    double rate = 0.0;
    double correlation = 0.0;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(spot.size()); }

    /// All components set to the same scalar values.
    static BlackScholesSpec uniform(int dim, double spot, double volatility, double dividend,
                                    double rate, double correlation);

    void validate() const;
};

/// Heston model; the variance process is called `variance` here.
struct HestonSpec {
    double spot = 100.0;
    double initial_variance = 0.01;
    double mean_reversion = 0.0;
    double long_run_variance = 0.0;
    double vol_of_vol = 0.0;
    double correlation = 0.0;
    double rate = 0.0;

    void validate() const;
};

/// Parameters of the one-dimensional model equivalent to a geometric basket.
struct GeometricReduction {
    double spot;
    double volatility;
    double dividend;
};

/// Equicorrelation matrix with unit diagonal.
Eigen::MatrixXd correlation_matrix(int dim, double rho);

/// Lower-triangular L with L L^T equal to the equicorrelation matrix. For the
/// singular rho = 1 case returns the rank-one root (ones in the first column).
Eigen::MatrixXd build_correlation_root(const BlackScholesSpec& spec);

/// Exact log-normal stepping between grid dates. Path m draws its normals from
/// the substream derive_seed(seed, m), so the result does not depend on `threads`.
PathSet simulate_black_scholes(const BlackScholesSpec& spec, const ExerciseGrid& grid,
                               std::size_t paths, std::uint64_t seed, int threads = 1);

/// Log-Euler scheme with grid.substeps_per_interval steps per date interval and the
/// variance clamped at zero before every square root. State is (S, variance).
PathSet simulate_heston(const HestonSpec& spec, const ExerciseGrid& grid, std::size_t paths,
                        std::uint64_t seed, int threads = 1);

GeometricReduction reduce_geometric_to_1d(const BlackScholesSpec& spec);

}  // namespace nnlsm

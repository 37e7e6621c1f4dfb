#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nnlsm {

/// Read-only view of one simulated path: states and discounted payoffs on every date.
struct PathView {
    std::span<const double> states;    // (N+1) * dim, date-major
    std::span<const double> payoffs;   // N+1
    std::size_t dim = 0;

    [[nodiscard]] std::span<const double> state(std::size_t date) const {
        return states.subspan(date * dim, dim);
    }
    [[nodiscard]] std::size_t last_date() const noexcept { return payoffs.size() - 1; }
};

/// Simulated states X[m][n][j] and discounted payoffs Z[m][n], stored row-major in
/// [path][date][component] order.
class PathSet {
public:
    PathSet() = default;
    PathSet(std::size_t paths, std::size_t dates, std::size_t dim)
        : paths_(paths), dates_(dates), dim_(dim),
          states_(paths * dates * dim, 0.0), payoffs_(paths * dates, 0.0) {}

    [[nodiscard]] std::size_t paths() const noexcept { return paths_; }
    /// Number of stored dates, N + 1.
    [[nodiscard]] std::size_t dates() const noexcept { return dates_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    [[nodiscard]] std::span<double> state(std::size_t m, std::size_t n) {
        return {states_.data() + (m * dates_ + n) * dim_, dim_};
    }
    [[nodiscard]] std::span<const double> state(std::size_t m, std::size_t n) const {
        return {states_.data() + (m * dates_ + n) * dim_, dim_};
    }
    [[nodiscard]] double& payoff(std::size_t m, std::size_t n) { return payoffs_[m * dates_ + n]; }
    [[nodiscard]] double payoff(std::size_t m, std::size_t n) const { return payoffs_[m * dates_ + n]; }

    [[nodiscard]] PathView path(std::size_t m) const {
        return {{states_.data() + m * dates_ * dim_, dates_ * dim_},
                {payoffs_.data() + m * dates_, dates_},
                dim_};
    }

    [[nodiscard]] std::span<const double> raw_states() const noexcept { return states_; }
    [[nodiscard]] std::span<const double> raw_payoffs() const noexcept { return payoffs_; }
    [[nodiscard]] std::span<double> raw_states() noexcept { return states_; }
    [[nodiscard]] std::span<double> raw_payoffs() noexcept { return payoffs_; }

    friend bool operator==(const PathSet&, const PathSet&) = default;

private:
    std::size_t paths_ = 0;
    std::size_t dates_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> states_;
    std::vector<double> payoffs_;
};

}  // namespace nnlsm

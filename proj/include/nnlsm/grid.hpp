#pragma once

#include <cstddef>
#include <vector>

namespace nnlsm {

/// Exercise dates 0 = T_0 < T_1 < ... < T_N = maturity.
struct ExerciseGrid {
    double maturity = 1.0;
    std::vector<double> dates;          // N + 1 entries, dates.front() == 0
    int substeps_per_interval = 1;      // Euler substeps between consecutive dates

    /// N equally spaced dates on (0, maturity].
    static ExerciseGrid uniform(double maturity, int dates_count, int substeps_per_interval = 1);

    /// Uniform grid whose Euler substep is as close as possible to 1/steps_per_year.
    static ExerciseGrid uniform_with_step_rate(double maturity, int dates_count, double steps_per_year);

    [[nodiscard]] int dates_count() const noexcept { return static_cast<int>(dates.size()) - 1; }

    /// Throws std::invalid_argument if an invariant is broken.
    void validate() const;
};

}  // namespace nnlsm

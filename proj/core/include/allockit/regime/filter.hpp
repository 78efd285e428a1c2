#pragma once

#include "allockit/data/series.hpp"
#include "allockit/io/csv.hpp"
#include "allockit/regime/model.hpp"

namespace allockit::regime {

/// Row r of each matrix refers to panel row `first_row + r`; the first p rows only serve as lags.
struct FilterOutput {
    std::size_t first_row = 0;
    numerics::Matrix predicted;  ///< Pr(S_t = j | y_1..y_{t−1})
    numerics::Matrix filtered;   ///< Pr(S_t = j | y_1..y_t)
    numerics::Matrix smoothed;   ///< Pr(S_t = j | y_1..y_T); empty before smoothing
    double log_likelihood = 0.0;

    std::size_t rows() const noexcept { return filtered.rows(); }
};

/// Predict-update recursion from π₀ with per-step scaling: log f is shifted by its maximum
/// before exponentiation and the normalizers are summed in log space.
FilterOutput hamilton_filter(const MsModel& model, const data::ReturnPanel& panel);

/// Backward recursion smoothed_t,i = filtered_t,i · Σ_j P_ij · smoothed_{t+1,j} / predicted_{t+1,j},
/// with predicted probabilities floored at 1e-300.
FilterOutput kim_smooth(const MsModel& model, const FilterOutput& filter);

/// Smoothed probabilities plus Σ_t Pr(S_t = i, S_{t+1} = j | all data), the expected transition counts.
struct SmootherResult {
    FilterOutput output;
    numerics::Matrix transition_counts;
};
SmootherResult kim_smooth_with_transitions(const MsModel& model, const FilterOutput& filter);

/// Columns: date, filtered_1..k, smoothed_1..k (states numbered from 1).
io::CsvTable probabilities_to_csv(const FilterOutput& out, const data::ReturnPanel& panel);

}  // namespace allockit::regime

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "allockit/regime/filter.hpp"
#include "allockit/regime/model.hpp"

namespace allockit::regime {

struct EmConfig {
    std::size_t k = 2;
    std::size_t p = 0;
    std::size_t starts = 8;
    std::uint64_t seed = 1;
    double tolerance = 1e-8;  ///< relative log-likelihood change
    std::size_t max_iterations = 1000;
    unsigned workers = 1;
};

struct FitReport {
    MsModel model;
    std::size_t iterations = 0;
    double log_likelihood = 0.0;
    std::vector<double> log_likelihood_trace;  ///< one entry per E-step
    bool converged = false;
    bool variance_floor_applied = false;
    std::size_t best_start = 0;
    std::size_t observations = 0;  ///< rows entering the likelihood
    std::size_t parameters = 0;
    double aic = 0.0;
    double bic = 0.0;
    std::vector<std::string> warnings;
    FilterOutput probabilities;  ///< filtered and smoothed under the returned model
};

/// Free parameters of a k-state VAR(p) on d series: intercepts, AR matrices, covariances,
/// transition rows and π₀.
std::size_t count_parameters(std::size_t k, std::size_t p, std::size_t d);

/// EM from `starts` random initializations (seeded by seed + start index); the fit with the
/// highest final log-likelihood wins and states are relabelled by ascending first-series intercept.
/// k = 1 is solved in closed form (one iteration).
FitReport em_fit(const data::ReturnPanel& panel, const EmConfig& config);

/// Reorders states so that intercept[0] ascends (bear first).
MsModel relabel_bear_first(const MsModel& model);

}  // namespace allockit::regime

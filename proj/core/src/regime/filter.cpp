#include "allockit/regime/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "allockit/error.hpp"
#include "allockit/numerics/gaussian.hpp"

namespace allockit::regime {

using numerics::Matrix;
using numerics::Vector;

namespace {

constexpr double kProbabilityFloor = 1e-300;

void normalize_row(std::span<double> row) {
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
}

}  // namespace

FilterOutput hamilton_filter(const MsModel& model, const data::ReturnPanel& panel) {
    model.validate();
    const std::size_t k = model.k();
    const std::size_t d = model.dims();
    if (panel.num_assets() != d) throw ConfigError("panel width does not match the model dimension");
    const std::size_t T = panel.num_periods();
    if (T <= model.p) throw ConfigError("panel is too short for the autoregressive order");

    std::vector<numerics::GaussianDensity> dens;
    for (const auto& st : model.states) dens.emplace_back(st.intercept, st.covariance);

    FilterOutput out;
    out.first_row = model.p;
    const std::size_t rows = T - model.p;
    out.predicted = Matrix(rows, k);
    out.filtered = Matrix(rows, k);

    Vector pred = model.initial;
    Vector logf(k);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + model.p;
        const auto y = panel.row(t);
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            logf[j] = model.p == 0 ? dens[j].log_pdf(y) : dens[j].log_pdf(y, model.conditional_mean(j, panel.values, t));
            if (pred[j] > 0.0) peak = std::max(peak, logf[j]);
        }
        if (!std::isfinite(peak)) throw NumericError("zero likelihood at row " + std::to_string(t));
        double scale = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = pred[j] * std::exp(logf[j] - peak);
            out.filtered(r, j) = v;
            scale += v;
        }
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw NumericError("filter normalizer vanished at row " + std::to_string(t));
        out.log_likelihood += peak + std::log(scale);
        for (std::size_t j = 0; j < k; ++j) {
            out.predicted(r, j) = pred[j];
            out.filtered(r, j) /= scale;
        }
        // Next prediction: Pᵀ · filtered.
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += model.transition(i, j) * out.filtered(r, i);
            pred[j] = s;
        }
        normalize_row(pred);
    }
    return out;
}

SmootherResult kim_smooth_with_transitions(const MsModel& model, const FilterOutput& filter) {
    const std::size_t k = model.k();
    const std::size_t rows = filter.rows();
    if (rows == 0 || filter.filtered.cols() != k) throw ConfigError("filter output does not match the model");

    SmootherResult res{filter, Matrix(k, k, 0.0)};
    Matrix& sm = res.output.smoothed;
    sm = Matrix(rows, k);
    for (std::size_t j = 0; j < k; ++j) sm(rows - 1, j) = filter.filtered(rows - 1, j);

    Vector ratio(k);
    for (std::size_t r = rows - 1; r-- > 0;) {
        for (std::size_t j = 0; j < k; ++j)
            ratio[j] = sm(r + 1, j) / std::max(filter.predicted(r + 1, j), kProbabilityFloor);
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double xi = filter.filtered(r, i) * model.transition(i, j) * ratio[j];
                res.transition_counts(i, j) += xi;
                s += xi;
            }
            sm(r, i) = s;
        }
        normalize_row(sm.row(r));
    }
    return res;
}

FilterOutput kim_smooth(const MsModel& model, const FilterOutput& filter) {
    return kim_smooth_with_transitions(model, filter).output;
}

io::CsvTable probabilities_to_csv(const FilterOutput& out, const data::ReturnPanel& panel) {
    const std::size_t k = out.filtered.cols();
    io::CsvTable t;
    t.header = {"date"};
    for (std::size_t j = 0; j < k; ++j) t.header.push_back("filtered_" + std::to_string(j + 1));
    for (std::size_t j = 0; j < k; ++j) t.header.push_back("smoothed_" + std::to_string(j + 1));
    for (std::size_t r = 0; r < out.rows(); ++r) {
        std::vector<std::string> row{panel.dates.at(out.first_row + r).to_string()};
        for (std::size_t j = 0; j < k; ++j) row.push_back(io::format_double(out.filtered(r, j)));
        for (std::size_t j = 0; j < k; ++j)
            row.push_back(out.smoothed.empty() ? "nan" : io::format_double(out.smoothed(r, j)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace allockit::regime

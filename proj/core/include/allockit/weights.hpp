#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "allockit/numerics/matrix.hpp"

namespace allockit {

/// Portfolio allocation over a labelled asset universe.
struct WeightVector {
    std::vector<std::string> asset_ids;
    numerics::Vector weights;

    std::size_t size() const noexcept { return weights.size(); }
    double sum() const;
    /// Weight of `asset_id`, or 0 when the asset is not part of the universe.
    double weight_of(std::string_view asset_id) const;
};

/// Labels `asset_0 … asset_{n-1}` for callers that work with unlabelled vectors.
std::vector<std::string> default_asset_ids(std::size_t n);

}  // namespace allockit

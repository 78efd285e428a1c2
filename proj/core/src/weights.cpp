#include "allockit/weights.hpp"

#include <algorithm>

namespace allockit {

double WeightVector::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double WeightVector::weight_of(std::string_view asset_id) const {
    const auto it = std::find(asset_ids.begin(), asset_ids.end(), asset_id);
    if (it == asset_ids.end()) return 0.0;
    return weights[static_cast<std::size_t>(it - asset_ids.begin())];
}

std::vector<std::string> default_asset_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("asset_" + std::to_string(i));
    return ids;
}

}  // namespace allockit

#pragma once

#include <optional>

#include "laud/core.hpp"

namespace laud {

// Read access to simulation labels. Only oracles and the evaluation harness
// include this header; scorers, strategies and the trainer never see it.
class GroundTruth {
 public:
  static std::optional<Label> label_of(const DataPoint& p) noexcept { return p.hidden_label_; }
  static bool has_label(const DataPoint& p) noexcept { return p.hidden_label_.has_value(); }
};

}  // namespace laud

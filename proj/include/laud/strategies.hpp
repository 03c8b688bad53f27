#pragma once

#include <span>
#include <vector>

#include "laud/core.hpp"
#include "laud/rng.hpp"

namespace laud {

struct SelectionRequest {
  std::span<const ScoredPoint> scored_pool;
  const IdSet* excluded = nullptr;  // may be null
  int k = 0;
};

/// H(p) = -p ln p - (1-p) ln(1-p) in nats, with 0 ln 0 = 0. Evaluated as a
/// function of |p - 0.5| so that p and 1 - p give bit-identical values.
double binary_entropy(double p);

/// The k non-excluded points of highest binary entropy, ties to the smaller
/// id. For two classes H(p) is strictly decreasing in |p - 0.5|, so the
/// ranking is done on that margin, which has no rounding ties to break.
std::vector<PointId> select_uncertain(const SelectionRequest& req);

/// Uniform sample without replacement from the non-excluded points, taken
/// in scored_pool order.
std::vector<PointId> select_random(const SelectionRequest& req, Rng& rng);

enum class ConfidenceSide { positive, negative };

/// Uniform sample of m points from the confident decile of the zero-shot
/// scores: the ceil(n/10) highest p (positive side) or lowest p (negative
/// side), ranked with id tie-break over the whole scored pool; excluded
/// points are then dropped from that set.
std::vector<PointId> select_confident(std::span<const ScoredPoint> zero_shot, const IdSet& excluded, int m,
                                      ConfidenceSide side, Rng& rng);

inline std::vector<PointId> select_confident_positive(std::span<const ScoredPoint> zero_shot, const IdSet& excluded,
                                                      int m, Rng& rng) {
  return select_confident(zero_shot, excluded, m, ConfidenceSide::positive, rng);
}

}  // namespace laud

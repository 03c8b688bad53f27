#pragma once

#include <span>
#include <vector>

#include "laud/core.hpp"
#include "laud/oracles.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

struct ColdStartPlan {
  std::vector<PointId> positive_candidates;  // k/2 highest p_positive
  std::vector<PointId> negative_candidates;  // k/2 lowest p_positive
  std::vector<ScoredPoint> scores_used;
};

/// Confidence-ranked seed set. Positives are the top k/2 by p descending,
/// negatives the top k/2 by 1 - p descending among the rest; ties go to the
/// smaller id. Balance is over predicted classes; the oracle decides labels.
ColdStartPlan plan_coldstart(std::vector<ScoredPoint> scores, int k);
ColdStartPlan plan_coldstart(const Pool& pool, const Scorer& scorer, int k);

/// Positives first, then negatives, matching the plan's order.
std::vector<PendingQuery> coldstart_queries(const ColdStartPlan& plan);

/// Asks the oracle about every candidate and returns k iteration-0
/// annotations carrying the oracle's labels. Nothing is returned if the
/// oracle fails or defers.
std::vector<Annotation> execute_coldstart(const ColdStartPlan& plan, const Pool& pool, Oracle& oracle,
                                          const std::string& category, const Clock& clock = system_clock_ms);

}  // namespace laud

#include "laud/coldstart.hpp"

#include <algorithm>

#include "laud/errors.hpp"

namespace laud {

ColdStartPlan plan_coldstart(std::vector<ScoredPoint> scores, int k) {
  if (k < 2 || k % 2 != 0) throw InvalidArgument("k must be even and at least 2");
  const auto half = static_cast<std::size_t>(k / 2);
  if (scores.size() < static_cast<std::size_t>(k))
    throw DataError("pool has " + std::to_string(scores.size()) + " points, cold-start needs at least " +
                    std::to_string(k));
  for (const auto& s : scores)
    if (!(s.p_positive >= 0.0 && s.p_positive <= 1.0)) throw InvalidArgument("score outside [0,1] for " + s.id);

  ColdStartPlan plan;
  std::vector<const ScoredPoint*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);

  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half), order.end(),
                    [](const ScoredPoint* a, const ScoredPoint* b) {
                      if (a->p_positive != b->p_positive) return a->p_positive > b->p_positive;
                      return a->id < b->id;
                    });
  IdSet taken;
  for (std::size_t i = 0; i < half; ++i) {
    plan.positive_candidates.push_back(order[i]->id);
    taken.insert(order[i]->id);
  }

  std::erase_if(order, [&](const ScoredPoint* s) { return taken.contains(s->id); });
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half), order.end(),
                    [](const ScoredPoint* a, const ScoredPoint* b) {
                      if (a->p_positive != b->p_positive) return a->p_positive < b->p_positive;
                      return a->id < b->id;
                    });
  for (std::size_t i = 0; i < half; ++i) plan.negative_candidates.push_back(order[i]->id);

  plan.scores_used = std::move(scores);
  return plan;
}

ColdStartPlan plan_coldstart(const Pool& pool, const Scorer& scorer, int k) {
  if (pool.size() < static_cast<std::size_t>(std::max(k, 0)))
    throw DataError("pool has " + std::to_string(pool.size()) + " points, cold-start needs at least " +
                    std::to_string(k));
  return plan_coldstart(score_pool(scorer, pool), k);
}

std::vector<PendingQuery> coldstart_queries(const ColdStartPlan& plan) {
  std::vector<PendingQuery> out;
  for (const auto* list : {&plan.positive_candidates, &plan.negative_candidates})
    for (const auto& id : *list) out.push_back({request_id_for(Purpose::coldstart, 0, id), id, Purpose::coldstart, 0});
  return out;
}

std::vector<Annotation> execute_coldstart(const ColdStartPlan& plan, const Pool& pool, Oracle& oracle,
                                          const std::string& category, const Clock& clock) {
  const auto queries = coldstart_queries(plan);
  std::vector<OracleRequest> batch;
  batch.reserve(queries.size());
  for (const auto& q : queries) batch.push_back({q.request_id, pool.at(q.point_id), q.purpose, category});

  auto answers = oracle.request(batch);
  if (!answers) throw OracleError("oracle deferred the cold-start batch");
  const auto ordered = match_answers(batch, std::move(*answers));

  std::vector<Annotation> out;
  out.reserve(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i)
    out.push_back({queries[i].point_id, ordered[i].label, ordered[i].oracle_id, 0, clock()});
  return out;
}

}  // namespace laud

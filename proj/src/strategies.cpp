#include "laud/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "laud/errors.hpp"

namespace laud {

namespace {

bool excluded(const SelectionRequest& req, const PointId& id) { return req.excluded && req.excluded->contains(id); }

std::vector<const ScoredPoint*> remaining(const SelectionRequest& req) {
  if (req.k < 0) throw InvalidArgument("k must be non-negative");
  std::vector<const ScoredPoint*> out;
  out.reserve(req.scored_pool.size());
  for (const auto& s : req.scored_pool)
    if (!excluded(req, s.id)) out.push_back(&s);
  if (out.size() < static_cast<std::size_t>(req.k)) throw InsufficientCandidates(out.size(), static_cast<std::size_t>(req.k));
  return out;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binary_entropy: p outside [0,1]");
  const double d = std::abs(p - 0.5);
  return -xlogx(0.5 - d) - xlogx(0.5 + d);
}

std::vector<PointId> select_uncertain(const SelectionRequest& req) {
  auto cands = remaining(req);
  for (const auto* c : cands)
    if (!(c->p_positive >= 0.0 && c->p_positive <= 1.0)) throw InvalidArgument("score outside [0,1] for " + c->id);
  const auto k = static_cast<std::ptrdiff_t>(req.k);
  std::partial_sort(cands.begin(), cands.begin() + k, cands.end(), [](const ScoredPoint* a, const ScoredPoint* b) {
    const double ma = std::abs(a->p_positive - 0.5);
    const double mb = std::abs(b->p_positive - 0.5);
    if (ma != mb) return ma < mb;
    return a->id < b->id;
  });
  std::vector<PointId> out;
  out.reserve(static_cast<std::size_t>(req.k));
  for (std::ptrdiff_t i = 0; i < k; ++i) out.push_back(cands[static_cast<std::size_t>(i)]->id);
  return out;
}

std::vector<PointId> select_random(const SelectionRequest& req, Rng& rng) {
  const auto cands = remaining(req);
  std::vector<PointId> out;
  for (const auto i : sample_indices(rng, cands.size(), static_cast<std::size_t>(req.k))) out.push_back(cands[i]->id);
  return out;
}

std::vector<PointId> select_confident(std::span<const ScoredPoint> zero_shot, const IdSet& excluded_ids, int m,
                                      ConfidenceSide side, Rng& rng) {
  if (m < 0) throw InvalidArgument("m must be non-negative");
  if (m == 0) return {};
  std::vector<const ScoredPoint*> order;
  order.reserve(zero_shot.size());
  for (const auto& s : zero_shot) order.push_back(&s);
  const std::size_t decile = (zero_shot.size() + 9) / 10;
  const bool positive = side == ConfidenceSide::positive;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(decile), order.end(),
                    [positive](const ScoredPoint* a, const ScoredPoint* b) {
                      if (a->p_positive != b->p_positive)
                        return positive ? a->p_positive > b->p_positive : a->p_positive < b->p_positive;
                      return a->id < b->id;
                    });
  order.resize(decile);
  std::erase_if(order, [&](const ScoredPoint* s) { return excluded_ids.contains(s->id); });
  if (order.size() < static_cast<std::size_t>(m)) throw InsufficientCandidates(order.size(), static_cast<std::size_t>(m));
  std::vector<PointId> out;
  for (const auto i : sample_indices(rng, order.size(), static_cast<std::size_t>(m))) out.push_back(order[i]->id);
  return out;
}

}  // namespace laud

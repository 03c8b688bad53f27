#include "laud/evaluation.hpp"

#include <cstdio>
#include <iomanip>

#include "laud/errors.hpp"

namespace laud {

namespace {
void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("decision threshold must lie in (0, 1)");
}
}  // namespace

std::vector<PointId> infer_positives(std::span<const ScoredPoint> scores, double threshold) {
  check_threshold(threshold);
  std::vector<PointId> out;
  for (const auto& s : scores)
    if (s.p_positive >= threshold) out.push_back(s.id);
  return out;
}

std::vector<PointId> infer_positives(const ClassifierParams<double>& params, const Pool& pool,
                                     const PoolFeatures& features, double threshold) {
  check_threshold(threshold);
  if (static_cast<std::size_t>(features.rows()) != pool.size())
    throw InvalidArgument("feature rows do not match pool size");
  const auto probs = predict_proba(params, features);
  std::vector<PointId> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (probs[static_cast<Eigen::Index>(i)] >= threshold) out.push_back(pool[i].id());
  return out;
}

std::vector<PointId> audit_sample(std::span<const PointId> inferred, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("evaluation sample size must be at least 1");
  const auto count = std::min(inferred.size(), static_cast<std::size_t>(n));
  std::vector<PointId> out;
  out.reserve(count);
  for (const auto i : sample_indices(rng, inferred.size(), count)) out.push_back(inferred[i]);
  return out;
}

EvaluationReport summarize_audit(std::span<const Label> audit_labels, std::size_t inferred_count, double threshold,
                                 std::uint64_t seed) {
  EvaluationReport r;
  r.n_sampled = static_cast<int>(audit_labels.size());
  for (const auto l : audit_labels) r.n_true_positive_in_sample += is_positive(l) ? 1 : 0;
  r.inferred_positive_count = inferred_count;
  r.decision_threshold = threshold;
  r.seed = seed;
  if (r.n_sampled > 0) r.estimated_precision = static_cast<double>(r.n_true_positive_in_sample) / r.n_sampled;
  return r;
}

EvaluationReport estimate_precision(std::span<const PointId> inferred, const Pool& pool, Oracle& oracle, int n,
                                    std::uint64_t seed, const std::string& category, double threshold) {
  if (n < 1) throw InvalidArgument("evaluation sample size must be at least 1");
  if (inferred.empty()) {
    auto r = summarize_audit({}, 0, threshold, seed);
    r.oracle_id = oracle.id();
    return r;
  }
  auto rng = substream(seed, Stream::evaluation);
  const auto sample = audit_sample(inferred, n, rng);
  std::vector<OracleRequest> batch;
  batch.reserve(sample.size());
  for (const auto& id : sample)
    batch.push_back({request_id_for(Purpose::evaluation, 0, id), pool.at(id), Purpose::evaluation, category});
  auto answers = oracle.request(batch);
  if (!answers) throw OracleError("oracle deferred the evaluation batch");
  std::vector<Label> labels;
  for (const auto& a : match_answers(batch, std::move(*answers))) labels.push_back(a.label);
  auto r = summarize_audit(labels, inferred.size(), threshold, seed);
  r.oracle_id = oracle.id();
  return r;
}

ComparisonTable compare_methods(std::span<const NamedReport> reports) {
  if (reports.size() < 2) throw InvalidArgument("comparison needs at least two reports");
  ComparisonTable t;
  for (const auto& nr : reports)
    t.rows.push_back({nr.name, nr.report.oracle_id, nr.report.estimated_precision, nr.report.inferred_positive_count});
  for (std::size_t later = 1; later < t.rows.size(); ++later)
    for (std::size_t earlier = 0; earlier < later; ++earlier) {
      const auto& a = t.rows[later].estimated_precision;
      const auto& b = t.rows[earlier].estimated_precision;
      t.differences.push_back({t.rows[later].method, t.rows[earlier].method,
                               (a && b) ? std::optional<double>(*a - *b) : std::nullopt});
    }
  return t;
}

std::string format_precision(const std::optional<double>& p) {
  if (!p) return "not estimated";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *p * 100.0);
  return buf;
}

void print_comparison(std::ostream& out, const ComparisonTable& table, const std::string& category) {
  if (!category.empty()) out << "Category: " << category << '\n';
  out << std::left << std::setw(16) << "Method" << std::setw(14) << "Oracle" << std::setw(22) << "Estimated Precision"
      << "#Inferred-Positive\n";
  for (const auto& r : table.rows)
    out << std::setw(16) << r.method << std::setw(14) << r.oracle_id << std::setw(22)
        << format_precision(r.estimated_precision) << r.inferred_positive_count << '\n';
  out << '\n';
  for (const auto& d : table.differences) {
    out << d.minuend << " - " << d.subtrahend << ": ";
    if (d.difference) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%+.1f pp", *d.difference * 100.0);
      out << buf << '\n';
    } else {
      out << "undefined\n";
    }
  }
}

}  // namespace laud

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "laud/classifier.hpp"
#include "laud/core.hpp"
#include "laud/oracles.hpp"
#include "laud/rng.hpp"

namespace laud {

/// Ids (in pool order) whose probability is at least `threshold`.
std::vector<PointId> infer_positives(std::span<const ScoredPoint> scores, double threshold);
std::vector<PointId> infer_positives(const ClassifierParams<double>& params, const Pool& pool,
                                     const PoolFeatures& features, double threshold);

/// Which inferred positives get audited: min(n, |inferred|) ids drawn
/// uniformly without replacement.
std::vector<PointId> audit_sample(std::span<const PointId> inferred, int n, Rng& rng);

/// Builds the report from audit answers (true = confirmed positive).
EvaluationReport summarize_audit(std::span<const Label> audit_labels, std::size_t inferred_count,
                                 double threshold, std::uint64_t seed);

/// Samples, queries the oracle with purpose `evaluation`, and reports
/// #true-positive-in-sample / sample size. An empty inferred set yields a
/// report without a precision (undefined, not zero). Requires an oracle that
/// answers synchronously.
EvaluationReport estimate_precision(std::span<const PointId> inferred, const Pool& pool, Oracle& oracle, int n,
                                    std::uint64_t seed, const std::string& category, double threshold = 0.5);

struct ComparisonRow {
  std::string method;
  std::string oracle_id;
  std::optional<double> estimated_precision;
  std::size_t inferred_positive_count = 0;
};

struct PrecisionDifference {
  std::string minuend;     // later row
  std::string subtrahend;  // earlier row
  std::optional<double> difference;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::vector<PrecisionDifference> differences;  // every later row minus every earlier row
};

struct NamedReport {
  std::string name;
  EvaluationReport report;
};

ComparisonTable compare_methods(std::span<const NamedReport> reports);
void print_comparison(std::ostream& out, const ComparisonTable& table, const std::string& category = {});
std::string format_precision(const std::optional<double>& p);

}  // namespace laud

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "laud/model_options.hpp"

namespace laud {

using PointId = std::string;
using IdSet = std::unordered_set<PointId>;

enum class Label : std::uint8_t { negative = 0, positive = 1 };

constexpr Label to_label(bool positive) noexcept { return positive ? Label::positive : Label::negative; }
constexpr bool is_positive(Label l) noexcept { return l == Label::positive; }

class GroundTruth;

/// One unlabeled pool item. The simulation label travels with the point but
/// can only be read through GroundTruth (see ground_truth.hpp), which only
/// oracles and the evaluation harness include.
class DataPoint {
 public:
  DataPoint(std::string id, std::string text, std::optional<bool> hidden_label = std::nullopt);

  const PointId& id() const noexcept { return id_; }
  const std::string& text() const noexcept { return text_; }

 private:
  friend class GroundTruth;

  PointId id_;
  std::string text_;
  std::optional<Label> hidden_label_;
};

/// Immutable, ingestion-ordered collection of unique points.
class Pool {
 public:
  Pool() = default;
  explicit Pool(std::vector<DataPoint> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const DataPoint& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  const DataPoint* find(std::string_view id) const;
  const DataPoint& at(std::string_view id) const;
  std::optional<std::size_t> position(std::string_view id) const;
  bool contains(std::string_view id) const { return position(id).has_value(); }

 private:
  std::vector<DataPoint> points_;
  std::unordered_map<PointId, std::size_t> index_;
};

enum class Purpose { coldstart, loop, evaluation };
enum class Phase { initializing, awaiting_annotations, training, selecting, evaluating, done };
enum class StrategyId { uncertainty, random, confident_zero_shot };

std::string_view to_string(Purpose) noexcept;
std::string_view to_string(Phase) noexcept;
std::string_view to_string(StrategyId) noexcept;
Purpose parse_purpose(std::string_view);
Phase parse_phase(std::string_view);
StrategyId parse_strategy(std::string_view);

struct Annotation {
  PointId point_id;
  Label label = Label::negative;
  std::string oracle_id;
  int iteration = 0;  // 0 = cold-start
  std::int64_t created_at_ms = 0;  // informational only
};

/// Equal in every field except the timestamp.
bool same_content(const Annotation& a, const Annotation& b) noexcept;

struct ScoredPoint {
  PointId id;
  double p_positive = 0.5;
};

/// Milliseconds since the Unix epoch. Injected so that tests can pin it.
using Clock = std::function<std::int64_t()>;
std::int64_t system_clock_ms();

struct LoopConfig {
  int k = 16;
  int max_iterations = 9;
  int n_eval = 200;
  std::uint64_t seed = 0;
  StrategyId strategy = StrategyId::uncertainty;
  double decision_threshold = 0.5;
  std::string category = "coffee";
  ModelOptions model;

  void validate() const;
  /// Training annotations a completed run holds: k * (max_iterations + 1).
  int budget() const noexcept { return k * (max_iterations + 1); }
  friend bool operator==(const LoopConfig&, const LoopConfig&) = default;
};

struct IterationRecord {
  int iteration = 1;
  std::vector<PointId> selected_ids;
  int annotations_added = 0;
  int model_version = 0;  // the model whose scores drove the selection
  double train_loss_final = 0.0;
};

/// A query the run is waiting on. Resolved against the pool when sent.
struct PendingQuery {
  std::string request_id;
  PointId point_id;
  Purpose purpose = Purpose::loop;
  int iteration = 0;
};

struct EvaluationReport {
  std::string method;
  std::string oracle_id;
  int n_sampled = 0;
  int n_true_positive_in_sample = 0;
  std::optional<double> estimated_precision;  // empty when nothing was inferred positive
  std::size_t inferred_positive_count = 0;
  double decision_threshold = 0.5;
  std::uint64_t seed = 0;

  bool no_positives_inferred() const noexcept { return inferred_positive_count == 0; }
};

struct RunState {
  LoopConfig config;
  int iteration = 0;  // latest committed batch
  std::vector<Annotation> annotations;
  int model_version = 0;
  Phase phase = Phase::initializing;
  std::vector<PendingQuery> pending;
  std::vector<IterationRecord> records;
  std::optional<EvaluationReport> evaluation;

  int budget_used() const noexcept { return static_cast<int>(annotations.size()); }
};

std::string request_id_for(Purpose purpose, int iteration, std::string_view point_id);

}  // namespace laud

#include "laud/core.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <utility>

#include "laud/errors.hpp"

namespace laud {

DataPoint::DataPoint(std::string id, std::string text, std::optional<bool> hidden_label)
    : id_(std::move(id)), text_(std::move(text)) {
  if (id_.empty()) throw DataError("data point with empty id");
  if (text_.empty()) throw DataError("data point " + id_ + " has empty text");
  if (hidden_label) hidden_label_ = to_label(*hidden_label);
}

Pool::Pool(std::vector<DataPoint> points) : points_(std::move(points)) {
  index_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i].id(), i).second) throw DataError("duplicate id: " + points_[i].id());
  }
}

const DataPoint* Pool::find(std::string_view id) const {
  const auto pos = position(id);
  return pos ? &points_[*pos] : nullptr;
}

const DataPoint& Pool::at(std::string_view id) const {
  if (const auto* p = find(id)) return *p;
  throw DataError("unknown point id: " + std::string(id));
}

std::optional<std::size_t> Pool::position(std::string_view id) const {
  const auto it = index_.find(PointId(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view what) {
  for (const auto& [name, value] : table)
    if (name == text) return value;
  throw InvalidArgument("unknown " + std::string(what) + ": " + std::string(text));
}

template <class Enum, std::size_t N>
std::string_view enum_name(Enum value, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

constexpr std::array<std::pair<std::string_view, Purpose>, 3> kPurposes{{
    {"coldstart", Purpose::coldstart},
    {"loop", Purpose::loop},
    {"evaluation", Purpose::evaluation},
}};

constexpr std::array<std::pair<std::string_view, Phase>, 6> kPhases{{
    {"initializing", Phase::initializing},
    {"awaiting_annotations", Phase::awaiting_annotations},
    {"training", Phase::training},
    {"selecting", Phase::selecting},
    {"evaluating", Phase::evaluating},
    {"done", Phase::done},
}};

constexpr std::array<std::pair<std::string_view, StrategyId>, 3> kStrategies{{
    {"uncertainty", StrategyId::uncertainty},
    {"random", StrategyId::random},
    {"confident_zero_shot", StrategyId::confident_zero_shot},
}};

}  // namespace

std::string_view to_string(Purpose p) noexcept { return enum_name(p, kPurposes); }
std::string_view to_string(Phase p) noexcept { return enum_name(p, kPhases); }
std::string_view to_string(StrategyId s) noexcept { return enum_name(s, kStrategies); }
Purpose parse_purpose(std::string_view s) { return parse_enum(s, kPurposes, "purpose"); }
Phase parse_phase(std::string_view s) { return parse_enum(s, kPhases, "phase"); }
StrategyId parse_strategy(std::string_view s) { return parse_enum(s, kStrategies, "strategy"); }

bool same_content(const Annotation& a, const Annotation& b) noexcept {
  return a.point_id == b.point_id && a.label == b.label && a.oracle_id == b.oracle_id && a.iteration == b.iteration;
}

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void LoopConfig::validate() const {
  if (k < 2) throw InvalidArgument("k must be at least 2");
  if (k % 2 != 0) throw InvalidArgument("k must be even");
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be non-negative");
  if (n_eval < 1) throw InvalidArgument("n_eval must be at least 1");
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0))
    throw InvalidArgument("decision threshold must lie in (0, 1)");
  if (category.empty()) throw InvalidArgument("category must be non-empty");
  model.validate();
}

void FeatureSpec::validate() const {
  if (feature_dim < 2 || !std::has_single_bit(feature_dim))
    throw InvalidArgument("feature_dim must be a power of two >= 2");
  if (ngram_orders.empty()) throw InvalidArgument("at least one n-gram order is required");
  for (const int n : ngram_orders)
    if (n < 1) throw InvalidArgument("n-gram orders must be positive");
}

void AdamHyperparameters::validate() const {
  if (!(lr > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw InvalidArgument("Adam betas must lie in [0, 1)");
  if (weight_decay < 0.0) throw InvalidArgument("weight decay must be non-negative");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
}

void TrainOptions::validate() const {
  if (epochs < 0) throw InvalidArgument("epochs must be non-negative");
  if (batch_size < 1) throw InvalidArgument("batch size must be positive");
  adam.validate();
}

std::string request_id_for(Purpose purpose, int iteration, std::string_view point_id) {
  std::string out;
  switch (purpose) {
    case Purpose::coldstart:
    case Purpose::loop:
      out = "t" + std::to_string(iteration) + ":";
      break;
    case Purpose::evaluation:
      out = "eval:";
      break;
  }
  out += point_id;
  return out;
}

}  // namespace laud

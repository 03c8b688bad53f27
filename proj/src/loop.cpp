#include "laud/loop.hpp"

#include <algorithm>

#include "laud/coldstart.hpp"
#include "laud/errors.hpp"
#include "laud/evaluation.hpp"
#include "laud/store.hpp"
#include "laud/strategies.hpp"

namespace laud {

bool should_stop(const RunState& state) { return IterationBudget{}.should_stop(state); }

std::string method_name(StrategyId strategy) {
  switch (strategy) {
    case StrategyId::uncertainty:
      return "TLLM+LAUD";
    case StrategyId::random:
      return "TLLM+UNIFORM";
    case StrategyId::confident_zero_shot:
      return "TLLM+RAND";
  }
  return "TLLM";
}

namespace {

std::shared_ptr<const PoolFeatures> features_for(const Pool& pool, const LoopConfig& config,
                                                 std::shared_ptr<const PoolFeatures> given) {
  if (given) {
    if (static_cast<std::size_t>(given->rows()) != pool.size() ||
        static_cast<std::size_t>(given->cols()) != config.model.features.feature_dim)
      throw InvalidArgument("precomputed features do not match the pool and feature spec");
    return given;
  }
  return std::make_shared<const PoolFeatures>(featurize_pool(pool, config.model.features));
}

}  // namespace

LoopController::LoopController(const Pool& pool, const Scorer& zero_shot, Oracle& oracle, LoopConfig config,
                               LoopOptions options)
    : pool_(pool), zero_shot_(zero_shot), oracle_(oracle), options_(std::move(options)) {
  config.validate();
  if (pool_.size() < static_cast<std::size_t>(config.budget()))
    throw DataError("pool has " + std::to_string(pool_.size()) + " points but the run needs " +
                    std::to_string(config.budget()));
  state_.config = std::move(config);
  features_ = features_for(pool_, state_.config, options_.features);
  if (options_.store) {
    if (options_.store->training_log().size() > 0 || options_.store->has_snapshot())
      throw InvalidArgument("run directory already holds a run: " + options_.store->dir().string());
    persist();
  }
}

LoopController::LoopController(RunState state, const Pool& pool, const Scorer& zero_shot, Oracle& oracle,
                               LoopOptions options)
    : pool_(pool), zero_shot_(zero_shot), oracle_(oracle), options_(std::move(options)), state_(std::move(state)) {
  state_.config.validate();
  validate_against_pool();
  features_ = features_for(pool_, state_.config, options_.features);
  rebuild_missing_records();
  if (options_.store) options_.store->write_iterations(state_.records);
}

void LoopController::validate_against_pool() const {
  std::vector<PointId> missing;
  for (const auto& a : state_.annotations)
    if (!pool_.contains(a.point_id)) missing.push_back(a.point_id);
  for (const auto& q : state_.pending)
    if (!pool_.contains(q.point_id)) missing.push_back(q.point_id);
  if (missing.empty()) return;
  std::string list;
  for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
  throw DataError("pool is missing annotated ids: " + list);
}

// Iteration records lost with a crash are recomputed: record t holds batch t
// and the loss of model t, which is a deterministic retrain.
void LoopController::rebuild_missing_records() {
  std::vector<IterationRecord> rebuilt;
  for (int t = 1; t <= state_.iteration && static_cast<std::size_t>(t) * state_.config.k <= state_.annotations.size();
       ++t) {
    const auto found = std::find_if(state_.records.begin(), state_.records.end(),
                                    [t](const IterationRecord& r) { return r.iteration == t; });
    if (found != state_.records.end()) {
      rebuilt.push_back(*found);
      continue;
    }
    IterationRecord rec;
    rec.iteration = t;
    for (const auto& a : state_.annotations)
      if (a.iteration == t) rec.selected_ids.push_back(a.point_id);
    rec.annotations_added = static_cast<int>(rec.selected_ids.size());
    rec.model_version = t;
    if (state_.config.model.training.warm_start) {
      auto params = ClassifierParams<double>::zeros(state_.config.model.features);
      double loss = 0.0;
      for (int v = 1; v <= t; ++v) {
        auto r = train_version(v, params);
        params = std::move(r.params);
        loss = r.final_loss;
      }
      rec.train_loss_final = loss;
    } else {
      rec.train_loss_final = train_version(t, ClassifierParams<double>::zeros(state_.config.model.features)).final_loss;
    }
    rebuilt.push_back(std::move(rec));
  }
  state_.records = std::move(rebuilt);
}

const std::vector<ScoredPoint>& LoopController::zero_shot_scores() {
  if (!zero_shot_scores_) zero_shot_scores_ = score_pool(zero_shot_, pool_);
  return *zero_shot_scores_;
}

// Model v is trained on the first k*v annotations (cold-start plus v-1 loop
// batches) with its own training substream.
TrainResult<double> LoopController::train_version(int version, const ClassifierParams<double>& init) const {
  const auto count = static_cast<std::size_t>(state_.config.k) * static_cast<std::size_t>(version);
  if (count > state_.annotations.size()) throw InvariantViolation("model version ahead of the annotations");
  const std::span<const Annotation> labeled(state_.annotations.data(), count);
  auto [x, y] = labeled_rows(*features_, pool_, labeled);
  auto rng = substream(state_.config.seed, Stream::training, static_cast<std::uint64_t>(version));
  try {
    return train(init, x, y, state_.config.model.training, rng);
  } catch (const InvariantViolation&) {
    const bool positive = y.size() > 0 && y[0] > 0.5;
    throw InvariantViolation("single-class labeled set: all " + std::to_string(count) + " annotations after iteration " +
                             std::to_string(version - 1) + " are " + (positive ? "positive" : "negative") +
                             "; use a larger k or a better zero-shot lexicon");
  }
}

void LoopController::ensure_model() {
  if (model_ && model_built_for_ == state_.model_version) return;
  const auto fresh = ClassifierParams<double>::zeros(state_.config.model.features);
  if (state_.model_version == 0) {
    model_ = fresh;
    model_loss_ = 0.0;
  } else if (state_.config.model.training.warm_start) {
    auto params = fresh;
    for (int v = 1; v <= state_.model_version; ++v) {
      auto r = train_version(v, params);
      params = std::move(r.params);
      model_loss_ = r.final_loss;
    }
    model_ = std::move(params);
  } else {
    auto r = train_version(state_.model_version, fresh);
    model_ = std::move(r.params);
    model_loss_ = r.final_loss;
  }
  model_built_for_ = state_.model_version;
}

const ClassifierParams<double>& LoopController::model() {
  ensure_model();
  return *model_;
}

IdSet LoopController::annotated_ids() const {
  IdSet ids;
  ids.reserve(state_.annotations.size());
  for (const auto& a : state_.annotations) ids.insert(a.point_id);
  return ids;
}

std::vector<PendingQuery> LoopController::queries(const std::vector<PointId>& ids, Purpose purpose,
                                                  int iteration) const {
  std::vector<PendingQuery> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back({request_id_for(purpose, iteration, id), id, purpose, iteration});
  return out;
}

std::vector<OracleRequest> LoopController::pending_requests() const {
  std::vector<OracleRequest> out;
  out.reserve(state_.pending.size());
  for (const auto& q : state_.pending) out.push_back({q.request_id, pool_.at(q.point_id), q.purpose, state_.config.category});
  return out;
}

void LoopController::persist() {
  if (!options_.store) return;
  options_.store->write_snapshot(state_);
}

void LoopController::mark(std::string_view checkpoint) const {
  if (options_.checkpoint) options_.checkpoint(checkpoint);
}

void LoopController::do_initialize() {
  const auto plan = plan_coldstart(zero_shot_scores(), state_.config.k);
  state_.pending = coldstart_queries(plan);
  state_.phase = Phase::awaiting_annotations;
  persist();
  mark("selected");
}

bool LoopController::do_await() {
  const auto batch = pending_requests();
  auto answers = oracle_.request(batch);
  if (!answers) return false;
  const auto ordered = match_answers(batch, std::move(*answers));

  const int iteration = state_.pending.front().iteration;
  std::vector<Annotation> annotations;
  annotations.reserve(ordered.size());
  for (std::size_t i = 0; i < ordered.size(); ++i)
    annotations.push_back({state_.pending[i].point_id, ordered[i].label, ordered[i].oracle_id, iteration,
                           options_.clock()});

  std::optional<IterationRecord> record;
  if (iteration > 0) {
    ensure_model();
    record = IterationRecord{iteration, {}, static_cast<int>(annotations.size()), state_.model_version, model_loss_};
    for (const auto& q : state_.pending) record->selected_ids.push_back(q.point_id);
  }

  if (options_.store) {
    options_.store->training_log().append(annotations, iteration == 0 ? Purpose::coldstart : Purpose::loop);
    mark("log_appended");
  } else {
    const auto ids = annotated_ids();
    for (const auto& a : annotations)
      if (ids.contains(a.point_id)) throw InvariantViolation("point " + a.point_id + " is already annotated");
  }

  state_.annotations.insert(state_.annotations.end(), annotations.begin(), annotations.end());
  state_.iteration = iteration;
  state_.pending.clear();
  if (record) state_.records.push_back(std::move(*record));
  state_.phase = Phase::training;
  persist();
  if (options_.store) options_.store->write_iterations(state_.records);
  mark("committed");
  return true;
}

void LoopController::do_train() {
  const auto fresh = ClassifierParams<double>::zeros(state_.config.model.features);
  ensure_model();
  const auto& init = state_.config.model.training.warm_start ? *model_ : fresh;
  auto r = train_version(state_.model_version + 1, init);
  model_ = std::move(r.params);
  model_loss_ = r.final_loss;
  state_.model_version += 1;
  model_built_for_ = state_.model_version;

  const auto& rule = options_.stopping ? *options_.stopping : static_cast<const StoppingRule&>(IterationBudget{});
  state_.phase = rule.should_stop(state_) ? Phase::evaluating : Phase::selecting;
  persist();
  mark("trained");
}

void LoopController::do_select() {
  ensure_model();
  const int next = state_.iteration + 1;
  const auto excluded = annotated_ids();
  std::vector<PointId> chosen;
  auto rng = substream(state_.config.seed, Stream::selection, static_cast<std::uint64_t>(next));

  if (state_.config.strategy == StrategyId::confident_zero_shot) {
    const auto& zs = zero_shot_scores();
    const int half = state_.config.k / 2;
    chosen = select_confident(zs, excluded, half, ConfidenceSide::positive, rng);
    auto excluded_more = excluded;
    excluded_more.insert(chosen.begin(), chosen.end());
    auto negatives = select_confident(zs, excluded_more, half, ConfidenceSide::negative, rng);
    chosen.insert(chosen.end(), negatives.begin(), negatives.end());
  } else {
    const auto probs = predict_proba(*model_, *features_);
    std::vector<ScoredPoint> scored;
    scored.reserve(pool_.size());
    for (std::size_t i = 0; i < pool_.size(); ++i) scored.push_back({pool_[i].id(), probs[static_cast<Eigen::Index>(i)]});
    const SelectionRequest req{scored, &excluded, state_.config.k};
    chosen = state_.config.strategy == StrategyId::uncertainty ? select_uncertain(req) : select_random(req, rng);
  }

  state_.pending = queries(chosen, Purpose::loop, next);
  state_.phase = Phase::awaiting_annotations;
  persist();
  mark("selected");
}

bool LoopController::do_evaluate() {
  if (!options_.evaluate) {
    state_.phase = Phase::done;
    persist();
    return true;
  }
  ensure_model();
  const auto& cfg = state_.config;
  Oracle& auditor = options_.evaluation_oracle ? *options_.evaluation_oracle : oracle_;

  if (state_.pending.empty()) {
    const auto inferred = infer_positives(*model_, pool_, *features_, cfg.decision_threshold);
    if (inferred.empty()) {
      auto report = summarize_audit({}, 0, cfg.decision_threshold, cfg.seed);
      report.method = method_name(cfg.strategy);
      report.oracle_id = auditor.id();
      state_.evaluation = report;
      state_.phase = Phase::done;
      persist();
      if (options_.store) options_.store->write_evaluation(report);
      mark("evaluated");
      return true;
    }
    auto rng = substream(cfg.seed, Stream::evaluation);
    state_.pending = queries(audit_sample(inferred, cfg.n_eval, rng), Purpose::evaluation, state_.iteration);
    persist();
    return true;
  }

  const auto batch = pending_requests();
  auto answers = auditor.request(batch);
  if (!answers) return false;
  const auto ordered = match_answers(batch, std::move(*answers));

  std::vector<Label> labels;
  std::vector<Annotation> audit;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    labels.push_back(ordered[i].label);
    audit.push_back({state_.pending[i].point_id, ordered[i].label, ordered[i].oracle_id, state_.iteration,
                     options_.clock()});
  }
  const auto inferred = infer_positives(*model_, pool_, *features_, cfg.decision_threshold);
  auto report = summarize_audit(labels, inferred.size(), cfg.decision_threshold, cfg.seed);
  report.method = method_name(cfg.strategy);
  report.oracle_id = auditor.id();

  if (options_.store) options_.store->evaluation_log().append(audit, Purpose::evaluation);
  state_.evaluation = report;
  state_.pending.clear();
  state_.phase = Phase::done;
  persist();
  if (options_.store) options_.store->write_evaluation(report);
  mark("evaluated");
  return true;
}

bool LoopController::step() {
  parked_ = false;
  switch (state_.phase) {
    case Phase::initializing:
      do_initialize();
      return true;
    case Phase::awaiting_annotations:
      if (!do_await()) {
        parked_ = true;
        return false;
      }
      return true;
    case Phase::training:
      do_train();
      return true;
    case Phase::selecting:
      do_select();
      return true;
    case Phase::evaluating:
      if (!do_evaluate()) {
        parked_ = true;
        return false;
      }
      return true;
    case Phase::done:
      return false;
  }
  return false;
}

Phase LoopController::advance() {
  while (step()) {
  }
  return state_.phase;
}

LoopResult LoopController::result() {
  ensure_model();
  return {*model_, state_, state_.records};
}

namespace {
LoopResult finish(LoopController& controller) {
  controller.advance();
  if (controller.parked())
    throw InvalidArgument("oracle deferred its answers; drive asynchronous oracles through LoopController");
  return controller.result();
}
}  // namespace

LoopResult run_loop(const Pool& pool, const Scorer& zero_shot, Oracle& oracle, const LoopConfig& config,
                    LoopOptions options) {
  LoopController controller(pool, zero_shot, oracle, config, std::move(options));
  return finish(controller);
}

LoopResult resume(RunState state, const Pool& pool, const Scorer& zero_shot, Oracle& oracle, LoopOptions options) {
  LoopController controller(std::move(state), pool, zero_shot, oracle, std::move(options));
  return finish(controller);
}

}  // namespace laud

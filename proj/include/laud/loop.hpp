#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "laud/classifier.hpp"
#include "laud/core.hpp"
#include "laud/oracles.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

class RunStore;

/// Decides, after each training, whether the loop ends.
class StoppingRule {
 public:
  virtual ~StoppingRule() = default;
  virtual bool should_stop(const RunState& state) const = 0;
};

/// Stops once `max_iterations` loop batches have been annotated.
class IterationBudget final : public StoppingRule {
 public:
  bool should_stop(const RunState& state) const override { return state.iteration >= state.config.max_iterations; }
};

bool should_stop(const RunState& state);

std::string method_name(StrategyId strategy);

struct LoopOptions {
  RunStore* store = nullptr;               // persistence; in-memory when null
  Oracle* evaluation_oracle = nullptr;     // defaults to the training oracle
  bool evaluate = true;                    // audit the final model before `done`
  Clock clock = system_clock_ms;
  std::shared_ptr<const PoolFeatures> features;  // precomputed pool features
  std::shared_ptr<const StoppingRule> stopping;  // defaults to IterationBudget
  // Called at named durability points ("selected", "log_appended",
  // "committed", "trained", "evaluated"). Tests throw from it to simulate a crash.
  std::function<void(std::string_view)> checkpoint;
};

struct LoopResult {
  ClassifierParams<double> final_model;
  RunState state;
  std::vector<IterationRecord> iterations;
};

/// Single-writer state machine for one run:
///   initializing -> (awaiting_annotations -> training -> selecting)* -> evaluating -> done
/// Cold-start queries are issued from `initializing`; each later batch is
/// chosen in `selecting` by the configured strategy from the latest model.
/// Oracle answers for a batch are committed all at once, so a failing or
/// deferring oracle leaves the state exactly as it was.
class LoopController {
 public:
  /// Starts a fresh run. With a store, the store must be empty.
  LoopController(const Pool& pool, const Scorer& zero_shot, Oracle& oracle, LoopConfig config,
                 LoopOptions options = {});
  /// Continues from a saved state. Throws DataError naming annotated or
  /// pending ids the pool lacks.
  LoopController(RunState state, const Pool& pool, const Scorer& zero_shot, Oracle& oracle, LoopOptions options = {});

  /// Performs one transition. Returns false when done or when the oracle
  /// deferred (see parked()).
  bool step();
  /// Steps until done or parked; returns the phase reached.
  Phase advance();

  bool parked() const noexcept { return parked_; }
  bool done() const noexcept { return state_.phase == Phase::done; }
  const RunState& state() const noexcept { return state_; }

  /// The model at the current model_version, retrained deterministically if
  /// this controller has not built it yet.
  const ClassifierParams<double>& model();
  const PoolFeatures& features() const noexcept { return *features_; }

  LoopResult result();

 private:
  void validate_against_pool() const;
  void rebuild_missing_records();
  const std::vector<ScoredPoint>& zero_shot_scores();
  TrainResult<double> train_version(int version, const ClassifierParams<double>& init) const;
  void ensure_model();
  std::vector<OracleRequest> pending_requests() const;
  std::vector<PendingQuery> queries(const std::vector<PointId>& ids, Purpose purpose, int iteration) const;
  IdSet annotated_ids() const;

  void do_initialize();
  bool do_await();
  void do_train();
  void do_select();
  bool do_evaluate();
  void persist();
  void mark(std::string_view checkpoint) const;

  const Pool& pool_;
  const Scorer& zero_shot_;
  Oracle& oracle_;
  LoopOptions options_;
  RunState state_;
  std::shared_ptr<const PoolFeatures> features_;
  std::optional<std::vector<ScoredPoint>> zero_shot_scores_;
  std::optional<ClassifierParams<double>> model_;
  int model_built_for_ = -1;
  double model_loss_ = 0.0;
  bool parked_ = false;
};

/// Runs a fresh loop to completion. The oracle must answer synchronously.
LoopResult run_loop(const Pool& pool, const Scorer& zero_shot, Oracle& oracle, const LoopConfig& config,
                    LoopOptions options = {});

/// Continues a saved run to completion; a `done` state returns at once.
LoopResult resume(RunState state, const Pool& pool, const Scorer& zero_shot, Oracle& oracle,
                  LoopOptions options = {});

}  // namespace laud

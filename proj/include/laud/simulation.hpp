#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laud/core.hpp"
#include "laud/loop.hpp"
#include "laud/synth.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

/// One synthetic experiment: a corpus, its lexicon and precomputed features.
struct SimulationCorpus {
  Pool pool;
  LexiconScorer scorer;
  std::shared_ptr<const PoolFeatures> features;

  SimulationCorpus(const SynthOptions& options, const FeatureSpec& spec, double temperature = 1.0);
};

/// Precision of the zero-shot scorer alone (LLM+ZL): inferred positives are
/// the pool points it scores at or above the threshold.
EvaluationReport zero_shot_report(const SimulationCorpus& corpus, Oracle& auditor, const LoopConfig& config);

/// Runs the loop with `trainer` answering training queries and `auditor`
/// estimating the final model's precision.
EvaluationReport loop_report(const SimulationCorpus& corpus, Oracle& trainer, Oracle& auditor,
                             const LoopConfig& config);

struct MethodSummary {
  std::string method;
  std::vector<std::optional<double>> precisions;  // one per seed

  /// Mean over seeds; a seed without an estimate counts as precision 0.
  double mean() const;
  std::size_t undefined_count() const;
};

}  // namespace laud

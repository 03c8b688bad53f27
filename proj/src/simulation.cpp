#include "laud/simulation.hpp"

#include <algorithm>

#include "laud/evaluation.hpp"

namespace laud {

SimulationCorpus::SimulationCorpus(const SynthOptions& options, const FeatureSpec& spec, double temperature)
    : pool(synthesize_pool(options)),
      scorer(synthetic_lexicon(options.category, temperature)),
      features(std::make_shared<const PoolFeatures>(featurize_pool(pool, spec))) {}

EvaluationReport zero_shot_report(const SimulationCorpus& corpus, Oracle& auditor, const LoopConfig& config) {
  const auto scores = score_pool(corpus.scorer, corpus.pool);
  const auto inferred = infer_positives(scores, config.decision_threshold);
  auto report = estimate_precision(inferred, corpus.pool, auditor, config.n_eval, config.seed, config.category,
                                   config.decision_threshold);
  report.method = "LLM+ZL";
  return report;
}

EvaluationReport loop_report(const SimulationCorpus& corpus, Oracle& trainer, Oracle& auditor,
                             const LoopConfig& config) {
  LoopOptions options;
  options.evaluation_oracle = &auditor;
  options.features = corpus.features;
  options.clock = [] { return std::int64_t{0}; };
  const auto result = run_loop(corpus.pool, corpus.scorer, trainer, config, std::move(options));
  return *result.state.evaluation;
}

double MethodSummary::mean() const {
  if (precisions.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : precisions) sum += p.value_or(0.0);
  return sum / static_cast<double>(precisions.size());
}

std::size_t MethodSummary::undefined_count() const {
  return static_cast<std::size_t>(std::count(precisions.begin(), precisions.end(), std::nullopt));
}

}  // namespace laud

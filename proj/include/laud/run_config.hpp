#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "laud/core.hpp"
#include "laud/human_queue.hpp"
#include "laud/oracles.hpp"
#include "laud/prompt.hpp"
#include "laud/remote.hpp"
#include "laud/serialization.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

/// `scripted`, `noisy:<rho>`, `remote:<url>` or `human`.
struct OracleSpec {
  enum class Kind { scripted, noisy, remote, human };
  Kind kind = Kind::scripted;
  double flip_probability = 0.0;
  std::string url;

  static OracleSpec parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

/// `lexicon` or `remote:<url>`.
struct ScorerSpec {
  enum class Kind { lexicon, remote };
  Kind kind = Kind::lexicon;
  std::string url;

  static ScorerSpec parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const ScorerSpec&, const ScorerSpec&) = default;
};

/// Everything needed to start a run; shared by `laud run --config` and
/// POST /runs. Loop keys sit at the top level next to the run keys:
///   {"run_id", "dataset", "oracle", "evaluation_oracle", "scorer", "lexicon",
///    "temperature", "s1_template", "s2_template", "endpoint": {...},
///    "category", "k", "max_iterations", "n_eval", "seed", "strategy",
///    "decision_threshold", "model": {...}}
struct RunConfig {
  std::string run_id = "run";
  LoopConfig loop;
  OracleSpec oracle;
  std::optional<OracleSpec> evaluation_oracle;  // audits with `oracle` when absent
  ScorerSpec scorer;
  std::filesystem::path dataset;
  std::filesystem::path lexicon;  // empty: the category name is the only cue
  double temperature = 1.0;
  std::string s1_template{PromptTemplate::default_s1};
  std::string s2_template{PromptTemplate::default_s2};
  EndpointConfig endpoint;

  void validate() const;
  PromptTemplate prompt_template() const;
};

Record to_record(const RunConfig& c);
RunConfig run_config_from(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& c);

/// Lexicon used when no file is configured: the category name alone.
ZeroShotLexicon category_lexicon(const std::string& category, double temperature = 1.0);

std::unique_ptr<Scorer> make_scorer(const RunConfig& c);
/// The human oracle needs a queue; other kinds ignore it.
std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec, const RunConfig& c, HumanQueue* queue = nullptr);

}  // namespace laud

#pragma once

#include <cstdint>
#include <string>

#include "laud/core.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

/// Pseudo commodity names. Positives are built around a keyword of the
/// category family; negatives come from distractor families (including the
/// sibling beverage family); ambiguous items are negatives that pair a
/// category fragment with a distractor head ("mocha cookies", "咖啡 杯墊").
/// Counts are exact: round(size * fraction) each. Categories with keyword
/// families: "coffee" and "tea".
struct SynthOptions {
  std::size_t size = 10000;
  double positive_fraction = 0.10;
  double ambiguous_fraction = 0.05;
  std::uint64_t seed = 1;
  std::string category = "coffee";

  void validate() const;
};

struct SynthCounts {
  std::size_t positives = 0;
  std::size_t ambiguous = 0;
  std::size_t negatives = 0;  // including ambiguous
};

SynthCounts synth_counts(const SynthOptions& options);
Pool synthesize_pool(const SynthOptions& options);

/// A deliberately incomplete lexicon for the synthetic corpus: a few of the
/// category keywords, one weak generic cue and the most common distractor
/// heads. Many items carry none of its terms.
ZeroShotLexicon synthetic_lexicon(const std::string& category, double temperature = 1.0);

/// True when the text holds a category fragment (used by tests to check the
/// ambiguous items by construction).
bool has_category_fragment(const std::string& category, std::string_view text);

}  // namespace laud

#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laud/core.hpp"

namespace laud {

struct LexiconTerm {
  std::string term;
  double weight = 1.0;
};

/// Offline zero-shot scorer: p = sigmoid((sum of positive weights present -
/// sum of negative weights present) / temperature). A term counts once no
/// matter how often it occurs; matching is substring with ASCII case folding.
struct ZeroShotLexicon {
  std::vector<LexiconTerm> positive_terms;
  std::vector<LexiconTerm> negative_terms;
  double temperature = 1.0;

  void validate() const;
};

/// Parses `term<TAB>weight<TAB>+|-` lines. Blank lines and lines starting
/// with '#' are skipped.
ZeroShotLexicon parse_lexicon(std::istream& in, double temperature = 1.0);
ZeroShotLexicon load_lexicon(const std::filesystem::path& path, double temperature = 1.0);
void write_lexicon(std::ostream& out, const ZeroShotLexicon& lexicon);

double zero_shot_score(const ZeroShotLexicon& lexicon, std::string_view text);

/// Anything that assigns a positive-class probability from text alone.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string id() const = 0;
  virtual std::vector<double> score_texts(std::span<const std::string_view> texts) const = 0;
};

class LexiconScorer final : public Scorer {
 public:
  explicit LexiconScorer(ZeroShotLexicon lexicon);
  std::string id() const override { return "lexicon"; }
  std::vector<double> score_texts(std::span<const std::string_view> texts) const override;
  const ZeroShotLexicon& lexicon() const noexcept { return lexicon_; }

 private:
  ZeroShotLexicon lexicon_;
};

/// Scores every pool point, in pool order. Only ids and texts reach the scorer.
std::vector<ScoredPoint> score_pool(const Scorer& scorer, const Pool& pool);

}  // namespace laud

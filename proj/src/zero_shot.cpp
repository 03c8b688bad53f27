#include "laud/zero_shot.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "laud/classifier.hpp"
#include "laud/errors.hpp"

namespace laud {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; });
  return out;
}

double present_weight(const std::vector<LexiconTerm>& terms, const std::string& folded) {
  double total = 0.0;
  for (const auto& t : terms)
    if (folded.find(ascii_lower(t.term)) != std::string::npos) total += t.weight;
  return total;
}

}  // namespace

void ZeroShotLexicon::validate() const {
  if (positive_terms.empty()) throw InvalidArgument("lexicon needs at least one positive term");
  if (!(temperature > 0.0)) throw InvalidArgument("lexicon temperature must be positive");
  for (const auto* terms : {&positive_terms, &negative_terms})
    for (const auto& t : *terms) {
      if (t.term.empty()) throw InvalidArgument("lexicon term must be non-empty");
      if (!std::isfinite(t.weight)) throw InvalidArgument("lexicon weight must be finite: " + t.term);
    }
}

ZeroShotLexicon parse_lexicon(std::istream& in, double temperature) {
  ZeroShotLexicon lex;
  lex.temperature = temperature;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = "lexicon line " + std::to_string(line_no) + ": ";
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw DataError(where + "expected term<TAB>weight<TAB>polarity");
    LexiconTerm term{line.substr(0, t1), 0.0};
    try {
      std::size_t used = 0;
      const auto weight_text = line.substr(t1 + 1, t2 - t1 - 1);
      term.weight = std::stod(weight_text, &used);
      if (used != weight_text.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DataError(where + "weight is not a number");
    }
    const auto polarity = line.substr(t2 + 1);
    if (polarity == "+") lex.positive_terms.push_back(std::move(term));
    else if (polarity == "-") lex.negative_terms.push_back(std::move(term));
    else throw DataError(where + "polarity must be + or -");
  }
  try {
    lex.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  return lex;
}

ZeroShotLexicon load_lexicon(const std::filesystem::path& path, double temperature) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon " + path.string());
  return parse_lexicon(in, temperature);
}

void write_lexicon(std::ostream& out, const ZeroShotLexicon& lexicon) {
  const auto shortest = [](double w) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), w);
    return std::string(buf.data(), res.ptr);
  };
  for (const auto& t : lexicon.positive_terms) out << t.term << '\t' << shortest(t.weight) << "\t+\n";
  for (const auto& t : lexicon.negative_terms) out << t.term << '\t' << shortest(t.weight) << "\t-\n";
}

double zero_shot_score(const ZeroShotLexicon& lexicon, std::string_view text) {
  const auto folded = ascii_lower(text);
  const double margin = present_weight(lexicon.positive_terms, folded) - present_weight(lexicon.negative_terms, folded);
  return clamp_probability(sigmoid(margin / lexicon.temperature));
}

LexiconScorer::LexiconScorer(ZeroShotLexicon lexicon) : lexicon_(std::move(lexicon)) { lexicon_.validate(); }

std::vector<double> LexiconScorer::score_texts(std::span<const std::string_view> texts) const {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const auto t : texts) out.push_back(zero_shot_score(lexicon_, t));
  return out;
}

std::vector<ScoredPoint> score_pool(const Scorer& scorer, const Pool& pool) {
  std::vector<std::string_view> texts;
  texts.reserve(pool.size());
  for (const auto& p : pool) texts.push_back(p.text());
  const auto probs = scorer.score_texts(texts);
  if (probs.size() != pool.size()) throw DataError("scorer returned " + std::to_string(probs.size()) + " scores for " +
                                                   std::to_string(pool.size()) + " points");
  std::vector<ScoredPoint> out;
  out.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) throw DataError("scorer produced probability outside [0,1]");
    out.push_back({pool[i].id(), probs[i]});
  }
  return out;
}

}  // namespace laud

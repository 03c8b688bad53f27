#include <doctest.h>

#include <set>
#include <sstream>

#include "laud/dataset.hpp"
#include "laud/errors.hpp"
#include "laud/ground_truth.hpp"
#include "laud/synth.hpp"
#include "laud/zero_shot.hpp"

using namespace laud;

namespace {

struct Tally {
  std::size_t positives = 0, negatives = 0, negatives_with_fragment = 0, positives_without_fragment = 0;
};

Tally tally(const Pool& pool, const std::string& category) {
  Tally t;
  for (const auto& p : pool) {
    const bool frag = has_category_fragment(category, p.text());
    if (is_positive(*GroundTruth::label_of(p))) {
      ++t.positives;
      if (!frag) ++t.positives_without_fragment;
    } else {
      ++t.negatives;
      if (frag) ++t.negatives_with_fragment;
    }
  }
  return t;
}

}  // namespace

TEST_CASE("synthetic counts are exact") {
  SynthOptions o;
  const auto c = synth_counts(o);
  CHECK(c.positives == 1000);
  CHECK(c.ambiguous == 500);
  CHECK(c.negatives == 9000);

  const auto pool = synthesize_pool(o);
  CHECK(pool.size() == 10000);
  const auto t = tally(pool, "coffee");
  CHECK(t.positives == 1000);
  CHECK(t.negatives == 9000);
  CHECK(t.positives_without_fragment == 0);
  // ambiguous items are negatives carrying a fragment by construction
  CHECK(t.negatives_with_fragment >= 500);

  std::set<std::string> ids;
  for (const auto& p : pool) ids.insert(p.id());
  CHECK(ids.size() == 10000);
  CHECK(pool[0].id() == "item-000001");
}

TEST_CASE("synthetic corpus is a pure function of its options") {
  SynthOptions o;
  o.size = 800;
  o.seed = 11;
  std::ostringstream a, b, c;
  write_pool(a, synthesize_pool(o));
  write_pool(b, synthesize_pool(o));
  CHECK(a.str() == b.str());
  o.seed = 12;
  write_pool(c, synthesize_pool(o));
  CHECK(a.str() != c.str());
}

TEST_CASE("the tea family") {
  SynthOptions o;
  o.size = 1000;
  o.category = "tea";
  o.positive_fraction = 0.2;
  o.ambiguous_fraction = 0.0;
  const auto t = tally(synthesize_pool(o), "tea");
  CHECK(t.positives == 200);
  CHECK(t.positives_without_fragment == 0);
  CHECK(has_category_fragment("tea", "Jasmine green tea 20 bags"));
  CHECK_FALSE(has_category_fragment("tea", "dark roast beans"));
  CHECK(has_category_fragment("coffee", "ESPRESSO blend"));
}

TEST_CASE("synthetic lexicon is usable and incomplete") {
  const auto lex = synthetic_lexicon("coffee");
  CHECK_FALSE(lex.positive_terms.empty());
  CHECK_FALSE(lex.negative_terms.empty());
  SynthOptions o;
  o.size = 2000;
  const auto pool = synthesize_pool(o);
  const LexiconScorer scorer(lex);
  std::size_t neutral = 0;
  for (const auto& s : score_pool(scorer, pool))
    if (s.p_positive == 0.5) ++neutral;
  CHECK(neutral > 0);
  CHECK(neutral < pool.size());
}

TEST_CASE("synthetic options are validated") {
  SynthOptions o;
  o.category = "wine";
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  CHECK_THROWS_AS(synthetic_lexicon("wine"), InvalidArgument);
  o = {};
  o.positive_fraction = 0.7;
  o.ambiguous_fraction = 0.4;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.positive_fraction = -0.1;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = {};
  o.size = 10;
  o.positive_fraction = 0.05;
  CHECK(synth_counts(o).positives == 1);  // llround(0.5)
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "laud/errors.hpp"
#include "laud/prompt.hpp"
#include "laud/zero_shot.hpp"
#include "support.hpp"

using namespace laud;

TEST_CASE("lexicon score is the logistic of the present-weight margin") {
  ZeroShotLexicon lex;
  lex.positive_terms = {{"coffee", 4.0}};
  CHECK(zero_shot_score(lex, "Coffee beans") == doctest::Approx(1 / (1 + std::exp(-4.0))));
  CHECK(zero_shot_score(lex, "Coffee beans") == doctest::Approx(0.982).epsilon(1e-3));
  CHECK(zero_shot_score(lex, "green tea") == 0.5);
  // a term counts once
  CHECK(zero_shot_score(lex, "coffee coffee") == zero_shot_score(lex, "coffee"));

  lex.positive_terms = {{"latte", 2.0}};
  lex.negative_terms = {{"cookie", 2.0}};
  CHECK(zero_shot_score(lex, "latte cookie") == 0.5);
  lex.temperature = 2.0;
  CHECK(zero_shot_score(lex, "latte") == doctest::Approx(1 / (1 + std::exp(-1.0))));
}

TEST_CASE("matching folds ASCII case and leaves other scripts alone") {
  ZeroShotLexicon lex;
  lex.positive_terms = {{"LATTE", 1.0}, {"咖啡", 1.0}};
  CHECK(zero_shot_score(lex, "iced latte") > 0.5);
  CHECK(zero_shot_score(lex, "咖啡豆") > 0.5);
}

TEST_CASE("lexicon file parsing") {
  std::istringstream in("# comment\ncoffee\t2\t+\n\ntea\t1.5\t-\n");
  const auto lex = parse_lexicon(in);
  REQUIRE(lex.positive_terms.size() == 1);
  CHECK(lex.negative_terms[0].weight == 1.5);

  std::ostringstream out;
  write_lexicon(out, lex);
  CHECK(out.str() == "coffee\t2\t+\ntea\t1.5\t-\n");

  std::istringstream bad_weight("coffee\tx\t+\n");
  CHECK_THROWS_AS(parse_lexicon(bad_weight), DataError);
  std::istringstream bad_polarity("coffee\t1\t?\n");
  CHECK_THROWS_AS(parse_lexicon(bad_polarity), DataError);
  std::istringstream no_positive("tea\t1\t-\n");
  CHECK_THROWS_AS(parse_lexicon(no_positive), DataError);
  CHECK_THROWS_AS(load_lexicon("/nonexistent.tsv"), DataError);
}

TEST_CASE("score_pool keeps pool order and validates scorer output") {
  const Pool pool = test::separable_pool(4);
  const LexiconScorer scorer(test::coffee_lexicon());
  const auto scores = score_pool(scorer, pool);
  REQUIRE(scores.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(scores[i].id == pool[i].id());
  CHECK(scores[0].p_positive > 0.5);  // espresso roast
  CHECK(scores[1].p_positive < 0.5);  // green tea leaves

  struct Short final : Scorer {
    std::string id() const override { return "short"; }
    std::vector<double> score_texts(std::span<const std::string_view>) const override { return {0.5}; }
  };
  CHECK_THROWS_AS(score_pool(Short{}, pool), DataError);
}

TEST_CASE("prompt rendering") {
  const PromptTemplate tmpl("coffee");
  const auto latte = render_prompt(tmpl, "Iced Latte 330ml");
  CHECK(latte.s1 == "Commodity with name Iced Latte 330ml");
  CHECK(latte.s2 == "is belong to coffee category.");
  CHECK(render_prompt(PromptTemplate("tea"), "x").s2 == "is belong to tea category.");

  // inserted braces stay literal
  CHECK(render_prompt(tmpl, "{category} mug").s1 == "Commodity with name {category} mug");

  CHECK_THROWS_AS(PromptTemplate("no placeholder", "{category}", "c"), InvalidArgument);
  CHECK_THROWS_AS(PromptTemplate("{commodity} {commodity}", "{category}", "c"), InvalidArgument);
  CHECK_THROWS_AS(PromptTemplate("{commodity}", "nothing", "c"), InvalidArgument);
}

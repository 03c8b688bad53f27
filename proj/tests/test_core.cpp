#include <doctest.h>

#include <algorithm>
#include <set>

#include "laud/core.hpp"
#include "laud/errors.hpp"
#include "laud/ground_truth.hpp"
#include "laud/rng.hpp"

using namespace laud;

TEST_CASE("data points reject empty ids and texts") {
  CHECK_THROWS_AS(DataPoint("", "x"), DataError);
  CHECK_THROWS_AS(DataPoint("a", ""), DataError);
  DataPoint p("a", "latte", true);
  CHECK(p.id() == "a");
  CHECK(GroundTruth::label_of(p) == Label::positive);
  CHECK_FALSE(GroundTruth::has_label(DataPoint("b", "tea")));
}

TEST_CASE("pool keeps ingestion order and rejects duplicates") {
  Pool pool({DataPoint("b", "x"), DataPoint("a", "y")});
  CHECK(pool.size() == 2);
  CHECK(pool[0].id() == "b");
  CHECK(pool.position("a") == 1u);
  CHECK(pool.find("zz") == nullptr);
  CHECK_THROWS_AS(pool.at("zz"), DataError);
  CHECK_THROWS_WITH_AS(Pool({DataPoint("a", "x"), DataPoint("a", "y")}), "duplicate id: a", DataError);
}

TEST_CASE("enum names round trip") {
  for (auto p : {Phase::initializing, Phase::awaiting_annotations, Phase::training, Phase::selecting,
                 Phase::evaluating, Phase::done})
    CHECK(parse_phase(to_string(p)) == p);
  for (auto p : {Purpose::coldstart, Purpose::loop, Purpose::evaluation}) CHECK(parse_purpose(to_string(p)) == p);
  for (auto s : {StrategyId::uncertainty, StrategyId::random, StrategyId::confident_zero_shot})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK(to_string(Phase::awaiting_annotations) == "awaiting_annotations");
  CHECK_THROWS_AS(parse_phase("sleeping"), InvalidArgument);
}

TEST_CASE("loop config validation") {
  LoopConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.budget() == 160);
  c.k = 15;
  CHECK_THROWS_WITH_AS(c.validate(), "k must be even", InvalidArgument);
  c = {};
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.max_iterations = -1;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.decision_threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.model.features.feature_dim = 1000;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.model.training.adam.beta1 = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("request ids") {
  CHECK(request_id_for(Purpose::coldstart, 0, "item-1") == "t0:item-1");
  CHECK(request_id_for(Purpose::loop, 7, "item-1") == "t7:item-1");
  CHECK(request_id_for(Purpose::evaluation, 3, "item-1") == "eval:item-1");
}

TEST_CASE("same_content ignores the timestamp only") {
  Annotation a{"x", Label::positive, "scripted", 2, 10};
  Annotation b = a;
  b.created_at_ms = 99;
  CHECK(same_content(a, b));
  b.iteration = 3;
  CHECK_FALSE(same_content(a, b));
}

TEST_CASE("hash and generator reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
  }
  CHECK(Rng(42).next() != c.next());
  CHECK(substream(1, Stream::selection, 1).next() == substream(1, Stream::selection, 1).next());
  CHECK(substream(1, Stream::selection, 1).next() != substream(1, Stream::selection, 2).next());
  CHECK(substream(1, Stream::selection).next() != substream(1, Stream::evaluation).next());
}

TEST_CASE("bounded draws are in range and roughly uniform") {
  Rng rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("sample_indices draws distinct indices") {
  Rng rng(5);
  auto idx = sample_indices(rng, 50, 50);
  std::set<std::size_t> uniq(idx.begin(), idx.end());
  CHECK(uniq.size() == 50);
  CHECK(*uniq.rbegin() == 49);
  CHECK(sample_indices(rng, 10, 0).empty());
  CHECK_THROWS(sample_indices(rng, 3, 4));
}

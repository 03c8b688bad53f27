#include <doctest.h>

#include "laud/coldstart.hpp"
#include "laud/errors.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace laud;

TEST_CASE("cold start on a worked example") {
  const std::vector<ScoredPoint> s{{"a", 0.9}, {"b", 0.1}, {"c", 0.9}, {"d", 0.5}, {"e", 0.1}, {"f", 0.7}};
  const auto plan = plan_coldstart(s, 4);
  CHECK(plan.positive_candidates == std::vector<PointId>{"a", "c"});
  CHECK(plan.negative_candidates == std::vector<PointId>{"b", "e"});

  const auto q = coldstart_queries(plan);
  REQUIRE(q.size() == 4);
  CHECK(q[0].request_id == "t0:a");
  CHECK(q[3].point_id == "e");
  CHECK(q[2].purpose == Purpose::coldstart);
}

TEST_CASE("cold start when every score is equal falls back to ids") {
  const std::vector<ScoredPoint> s{{"d", 0.5}, {"a", 0.5}, {"c", 0.5}, {"b", 0.5}};
  const auto plan = plan_coldstart(s, 4);
  CHECK(plan.positive_candidates == std::vector<PointId>{"a", "b"});
  CHECK(plan.negative_candidates == std::vector<PointId>{"c", "d"});
}

TEST_CASE("cold start argument errors") {
  const std::vector<ScoredPoint> s{{"a", 0.9}, {"b", 0.1}, {"c", 0.3}};
  CHECK_THROWS_AS(plan_coldstart(s, 3), InvalidArgument);
  CHECK_THROWS_AS(plan_coldstart(s, 0), InvalidArgument);
  CHECK_THROWS_AS(plan_coldstart(s, 4), DataError);
  CHECK_THROWS_AS(plan_coldstart({{"a", 1.5}, {"b", 0.1}}, 2), InvalidArgument);
}

TEST_CASE("cold start balance property over random pools") {
  Rng rng(2024);
  const auto r = test::check_coldstart(rng, 500);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("execute_coldstart returns the oracle's labels in plan order") {
  const Pool pool = test::separable_pool(20);
  const LexiconScorer scorer(test::coffee_lexicon());
  const auto plan = plan_coldstart(pool, scorer, 6);
  ScriptedOracle oracle;
  const auto ann = execute_coldstart(plan, pool, oracle, "coffee", [] { return std::int64_t{5}; });
  REQUIRE(ann.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) CHECK(ann[i].point_id == plan.positive_candidates[i]);
  for (const auto& a : ann) {
    CHECK(a.iteration == 0);
    CHECK(a.created_at_ms == 5);
    CHECK(a.oracle_id == "scripted");
    // even-indexed points are the positives of the separable pool
    CHECK(is_positive(a.label) == (*pool.position(a.point_id) % 2 == 0));
  }
}

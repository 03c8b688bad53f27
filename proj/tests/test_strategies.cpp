#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "laud/errors.hpp"
#include "laud/strategies.hpp"
#include "properties.hpp"

using namespace laud;

TEST_CASE("binary entropy values") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK(binary_entropy(0.9) == doctest::Approx(0.3250829733914482).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.3) == binary_entropy(0.7));
  CHECK_THROWS_AS(binary_entropy(1.1), InvalidArgument);
  CHECK_THROWS_AS(binary_entropy(std::nan("")), InvalidArgument);
}

TEST_CASE("uncertainty picks the points nearest 0.5 with id tie-break") {
  const std::vector<ScoredPoint> s{{"a", 0.875}, {"b", 0.375}, {"c", 0.625}, {"d", 0.5}, {"e", 0.25}, {"f", 0.375}};
  CHECK(select_uncertain({s, nullptr, 1}) == std::vector<PointId>{"d"});
  CHECK(select_uncertain({s, nullptr, 3}) == std::vector<PointId>{"d", "b", "c"});
  const IdSet ex{"d", "b"};
  CHECK(select_uncertain({s, &ex, 2}) == std::vector<PointId>{"c", "f"});
  CHECK(select_uncertain({s, nullptr, 0}).empty());
  CHECK_THROWS_AS(select_uncertain({s, &ex, 5}), InsufficientCandidates);
}

TEST_CASE("uncertainty matches brute-force enumeration on small pools") {
  Rng rng(77);
  const auto small = test::check_uncertain_brute_force(rng, 400, 12);
  INFO(small.first_failure);
  CHECK(small.ok());
  const auto full = test::check_uncertain_brute_force(rng, 6, 20);
  INFO(full.first_failure);
  CHECK(full.ok());
}

TEST_CASE("entropy and margin orderings agree") {
  Rng rng(8);
  const auto r = test::check_entropy_margin_argsort(rng, 2000);
  INFO(r.first_failure);
  CHECK(r.ok());
}

TEST_CASE("uncertainty is invariant to pool order") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    auto s = test::random_scores(rng, 30);
    const auto before = select_uncertain({s, nullptr, 7});
    rng.shuffle(std::span(s));
    CHECK(select_uncertain({s, nullptr, 7}) == before);
  }
}

TEST_CASE("random selection is uniform, distinct and reproducible") {
  std::vector<ScoredPoint> s;
  for (int i = 0; i < 10; ++i) s.push_back({"p" + std::to_string(i), 0.5});
  const IdSet ex{"p0"};
  std::map<PointId, int> hits;
  Rng rng(1);
  for (int t = 0; t < 9000; ++t) {
    const auto pick = select_random({s, &ex, 3}, rng);
    CHECK(std::set<PointId>(pick.begin(), pick.end()).size() == 3);
    for (auto& id : pick) ++hits[id];
  }
  CHECK(hits.count("p0") == 0);
  for (auto& [id, n] : hits) CHECK(std::abs(n - 3000) < 200);
  Rng a(3), b(3);
  CHECK(select_random({s, nullptr, 4}, a) == select_random({s, nullptr, 4}, b));
}

TEST_CASE("confident decile sampling") {
  // 10 points: the decile is one point
  std::vector<ScoredPoint> ten;
  for (int i = 0; i < 10; ++i) ten.push_back({"p" + std::to_string(i), i / 10.0});
  Rng rng(1);
  CHECK(select_confident(ten, {}, 1, ConfidenceSide::positive, rng) == std::vector<PointId>{"p9"});
  CHECK(select_confident(ten, {}, 1, ConfidenceSide::negative, rng) == std::vector<PointId>{"p0"});
  CHECK_THROWS_AS(select_confident(ten, IdSet{"p9"}, 1, ConfidenceSide::positive, rng), InsufficientCandidates);

  // 100 points, m = 8: all drawn from the top 10
  std::vector<ScoredPoint> hundred;
  for (int i = 0; i < 100; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "x%03d", i);
    hundred.push_back({id, i / 100.0});
  }
  for (int t = 0; t < 50; ++t) {
    const auto pick = select_confident_positive(hundred, {}, 8, rng);
    REQUIRE(pick.size() == 8);
    CHECK(std::set<PointId>(pick.begin(), pick.end()).size() == 8);
    for (auto& id : pick) CHECK(id >= "x090");
  }
  CHECK(select_confident_positive(hundred, {}, 0, rng).empty());
  // 101 points: the decile is ceil(101/10) = 11
  hundred.push_back({"x100", 0.0});
  const auto pick = select_confident(hundred, {}, 11, ConfidenceSide::negative, rng);
  CHECK(std::set<PointId>(pick.begin(), pick.end()) ==
        std::set<PointId>{"x000", "x001", "x002", "x003", "x004", "x005", "x006", "x007", "x008", "x009", "x100"});
}

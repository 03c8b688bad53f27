#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "laud/evaluation.hpp"
#include "laud/oracles.hpp"
#include "laud/rng.hpp"

namespace laud::test {

// Central 95% band of Binomial(n, p) as counts [lo, hi]: lo is the smallest
// x with P(X <= x) >= 0.025, hi the smallest x with P(X <= x) >= 0.975.
inline std::pair<int, int> binomial_band(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (int x = 0; x <= n; ++x)
    pmf[static_cast<std::size_t>(x)] =
        std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + x * std::log(p) +
                 (n - x) * std::log1p(-p));
  double cdf = 0;
  int lo = -1, hi = n;
  for (int x = 0; x <= n; ++x) {
    cdf += pmf[static_cast<std::size_t>(x)];
    if (lo < 0 && cdf >= 0.025) lo = x;
    if (cdf >= 0.975) {
      hi = x;
      break;
    }
  }
  return {lo, hi};
}

struct CalibrationResult {
  double truth = 0;
  double mean_estimate = 0;
  double inside_band = 0;  // fraction of runs
  int runs = 0;
};

// Inferred set of `population` points of which round(truth * population) are
// true positives; each run audits n of them with a scripted oracle.
inline CalibrationResult calibrate(double truth, int runs, int n, std::size_t population = 10000) {
  const auto positives = static_cast<std::size_t>(std::llround(truth * static_cast<double>(population)));
  std::vector<DataPoint> points;
  std::vector<PointId> inferred;
  Rng shuffle(static_cast<std::uint64_t>(truth * 1000));
  std::vector<std::size_t> order(population);
  for (std::size_t i = 0; i < population; ++i) order[i] = i;
  shuffle.shuffle(std::span(order));
  for (std::size_t i = 0; i < population; ++i) {
    const std::string id = "m" + std::to_string(order[i]);
    points.emplace_back(id, "item " + id, i < positives);
    inferred.push_back(id);
  }
  const Pool pool(std::move(points));
  ScriptedOracle oracle;
  const auto [lo, hi] = binomial_band(n, truth);

  CalibrationResult r;
  r.truth = truth;
  r.runs = runs;
  int inside = 0;
  double sum = 0;
  for (int s = 0; s < runs; ++s) {
    const auto rep = estimate_precision(inferred, pool, oracle, n, static_cast<std::uint64_t>(s), "coffee");
    sum += *rep.estimated_precision;
    inside += rep.n_true_positive_in_sample >= lo && rep.n_true_positive_in_sample <= hi;
  }
  r.mean_estimate = sum / runs;
  r.inside_band = static_cast<double>(inside) / runs;
  return r;
}

}  // namespace laud::test

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "laud/core.hpp"
#include "laud/errors.hpp"
#include "laud/features.hpp"
#include "laud/model_options.hpp"
#include "laud/rng.hpp"

namespace laud {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Hashed n-gram logistic regression: p = sigmoid(w . x + b).
template <class Scalar>
struct ClassifierParams {
  Vector<Scalar> weights;
  Scalar bias{0};
  FeatureSpec features;

  /// Fresh initialization: all-zero weights and bias.
  static ClassifierParams zeros(const FeatureSpec& spec) {
    spec.validate();
    ClassifierParams p;
    p.weights = Vector<Scalar>::Zero(static_cast<Eigen::Index>(spec.feature_dim));
    p.features = spec;
    return p;
  }

  bool all_finite() const { return weights.allFinite() && std::isfinite(bias); }
};

template <class Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

/// log(1 + exp(z)) without overflow.
template <class Scalar>
Scalar softplus(Scalar z) {
  return std::max(z, Scalar(0)) + std::log1p(std::exp(-std::abs(z)));
}

/// Keeps probabilities strictly inside (0, 1) where sigmoid saturates.
template <class Scalar>
Scalar clamp_probability(Scalar p) {
  constexpr Scalar lo = std::numeric_limits<Scalar>::denorm_min();
  constexpr Scalar hi = Scalar(1) - std::numeric_limits<Scalar>::epsilon() / Scalar(2);
  return std::clamp(p, lo, hi);
}

template <class Scalar>
Scalar decision_value(const ClassifierParams<Scalar>& params, const Eigen::SparseVector<Scalar>& x) {
  Scalar z(0);
  for (typename Eigen::SparseVector<Scalar>::InnerIterator it(x); it; ++it) z += it.value() * params.weights[it.index()];
  return z + params.bias;
}

template <class Scalar>
Scalar predict_proba(const ClassifierParams<Scalar>& params, const Eigen::SparseVector<Scalar>& x) {
  return clamp_probability(sigmoid(decision_value(params, x)));
}

template <class Scalar>
Scalar predict_proba(const ClassifierParams<Scalar>& params, const DataPoint& point) {
  return predict_proba(params, featurize<Scalar>(point.text(), params.features));
}

/// Probabilities for every row of a feature matrix.
template <class Scalar>
Vector<Scalar> predict_proba(const ClassifierParams<Scalar>& params, const SparseRows<Scalar>& rows) {
  Vector<Scalar> z = rows * params.weights;
  return (z.array() + params.bias).unaryExpr([](Scalar v) { return clamp_probability(sigmoid(v)); }).matrix();
}

template <class Scalar>
struct LossGradient {
  Scalar loss{0};
  Vector<Scalar> weights;
  Scalar bias{0};
};

/// Mean binary cross-entropy over the rows of `x` (targets 0/1 in `y`) and
/// its exact gradient. Computed from logits through softplus, so it stays
/// finite where sigmoid saturates.
template <class Scalar>
LossGradient<Scalar> loss_and_gradient(const ClassifierParams<Scalar>& params, const SparseRows<Scalar>& x,
                                       const Vector<Scalar>& y) {
  if (x.rows() == 0 || x.rows() != y.size()) throw InvalidArgument("loss_and_gradient: empty or mismatched batch");
  LossGradient<Scalar> out;
  out.weights = Vector<Scalar>::Zero(params.weights.size());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Scalar z(0);
    for (typename SparseRows<Scalar>::InnerIterator it(x, r); it; ++it) z += it.value() * params.weights[it.col()];
    z += params.bias;
    out.loss += softplus(z) - y[r] * z;
    const Scalar residual = sigmoid(z) - y[r];
    for (typename SparseRows<Scalar>::InnerIterator it(x, r); it; ++it) out.weights[it.col()] += residual * it.value();
    out.bias += residual;
  }
  const auto n = static_cast<Scalar>(x.rows());
  out.loss /= n;
  out.weights /= n;
  out.bias /= n;
  return out;
}

/// Adam moments over a flat parameter vector. Weight decay is classic L2:
/// `weight_decay * theta` is added to the raw gradient before the moment
/// updates.
template <class Scalar>
struct AdamState {
  Vector<Scalar> m;
  Vector<Scalar> v;
  std::int64_t t = 0;
  AdamHyperparameters hyper;

  static AdamState for_size(Eigen::Index n, const AdamHyperparameters& hyper = {}) {
    hyper.validate();
    AdamState s;
    s.m = Vector<Scalar>::Zero(n);
    s.v = Vector<Scalar>::Zero(n);
    s.hyper = hyper;
    return s;
  }
};

template <class Scalar, class ThetaDerived, class GradDerived>
void adam_step(AdamState<Scalar>& state, Eigen::MatrixBase<ThetaDerived>& theta,
               const Eigen::MatrixBase<GradDerived>& gradient) {
  if (gradient.size() != theta.size() || state.m.size() != theta.size())
    throw InvalidArgument("adam_step: dimension mismatch");
  if (!gradient.allFinite()) throw InvalidArgument("adam_step: non-finite gradient");

  const auto& h = state.hyper;
  const auto b1 = static_cast<Scalar>(h.beta1);
  const auto b2 = static_cast<Scalar>(h.beta2);
  state.t += 1;

  const Vector<Scalar> g = gradient + static_cast<Scalar>(h.weight_decay) * theta;
  state.m = b1 * state.m + (Scalar(1) - b1) * g;
  state.v = b2 * state.v + (Scalar(1) - b2) * g.cwiseAbs2();

  const Scalar c1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(state.t));
  const Scalar c2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(state.t));
  theta -= (static_cast<Scalar>(h.lr) * (state.m.array() / c1) /
            ((state.v.array() / c2).sqrt() + static_cast<Scalar>(h.epsilon)))
               .matrix();
}

template <class Scalar>
struct TrainResult {
  ClassifierParams<Scalar> params;
  std::vector<Scalar> epoch_losses;  // mean training loss after each epoch
  Scalar final_loss{0};
};

namespace detail {

// Restricts training to the coordinates that can move: the columns the
// examples touch plus nonzero initial weights. Every other coordinate has
// theta = 0 and gradient 0, so Adam leaves it at exactly 0 and the compact
// run is bit-identical to a dense one.
template <class Scalar>
struct CompactProblem {
  std::vector<Eigen::Index> active;
  SparseRows<Scalar> x;
  Vector<Scalar> theta;  // active weights, then bias
};

template <class Scalar>
CompactProblem<Scalar> compact(const ClassifierParams<Scalar>& init, const SparseRows<Scalar>& x) {
  CompactProblem<Scalar> c;
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (typename SparseRows<Scalar>::InnerIterator it(x, r); it; ++it) c.active.push_back(it.col());
  for (Eigen::Index j = 0; j < init.weights.size(); ++j)
    if (init.weights[j] != Scalar(0)) c.active.push_back(j);
  std::sort(c.active.begin(), c.active.end());
  c.active.erase(std::unique(c.active.begin(), c.active.end()), c.active.end());

  const auto width = static_cast<Eigen::Index>(c.active.size());
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(x.nonZeros()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (typename SparseRows<Scalar>::InnerIterator it(x, r); it; ++it) {
      const auto pos = std::lower_bound(c.active.begin(), c.active.end(), it.col()) - c.active.begin();
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(pos), it.value());
    }
  c.x.resize(x.rows(), width);
  c.x.setFromTriplets(triplets.begin(), triplets.end());

  c.theta.resize(width + 1);
  for (Eigen::Index j = 0; j < width; ++j) c.theta[j] = init.weights[c.active[static_cast<std::size_t>(j)]];
  c.theta[width] = init.bias;
  return c;
}

template <class Scalar>
Scalar compact_logit(const SparseRows<Scalar>& x, Eigen::Index row, const Vector<Scalar>& theta) {
  Scalar z(0);
  for (typename SparseRows<Scalar>::InnerIterator it(x, row); it; ++it) z += it.value() * theta[it.col()];
  return z + theta[theta.size() - 1];
}

template <class Scalar>
Scalar compact_mean_loss(const SparseRows<Scalar>& x, const Vector<Scalar>& y, const Vector<Scalar>& theta) {
  Scalar loss(0);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Scalar z = compact_logit(x, r, theta);
    loss += softplus(z) - y[r] * z;
  }
  return loss / static_cast<Scalar>(x.rows());
}

}  // namespace detail

/// Minibatch Adam on mean binary cross-entropy. Example order is reshuffled
/// from `rng` every epoch; the result is a pure function of the inputs and
/// the rng state. Rejects labeled sets that do not contain both classes.
template <class Scalar>
TrainResult<Scalar> train(const ClassifierParams<Scalar>& init, const SparseRows<Scalar>& x, const Vector<Scalar>& y,
                          const TrainOptions& options, Rng& rng) {
  options.validate();
  if (x.rows() == 0 || x.rows() != y.size()) throw InvalidArgument("train: empty or mismatched labeled set");
  if (x.cols() != init.weights.size()) throw InvalidArgument("train: feature dimension mismatch");
  const auto positives = (y.array() > Scalar(0.5)).count();
  if (positives == 0 || positives == y.size()) throw InvariantViolation("single-class labeled set");

  auto problem = detail::compact(init, x);
  const Eigen::Index width = problem.x.cols();
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(options.batch_size), n);

  auto adam = AdamState<Scalar>::for_size(width + 1, options.adam);
  TrainResult<Scalar> out;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Vector<Scalar> grad(width + 1);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      grad.setZero();
      for (std::size_t i = start; i < stop; ++i) {
        const auto r = order[i];
        const Scalar residual = sigmoid(detail::compact_logit(problem.x, r, problem.theta)) - y[r];
        for (typename SparseRows<Scalar>::InnerIterator it(problem.x, r); it; ++it)
          grad[it.col()] += residual * it.value();
        grad[width] += residual;
      }
      grad /= static_cast<Scalar>(stop - start);
      adam_step(adam, problem.theta, grad);
    }
    out.epoch_losses.push_back(detail::compact_mean_loss(problem.x, y, problem.theta));
  }

  out.final_loss = out.epoch_losses.empty() ? detail::compact_mean_loss(problem.x, y, problem.theta)
                                            : out.epoch_losses.back();
  out.params = init;
  for (Eigen::Index j = 0; j < width; ++j) out.params.weights[problem.active[static_cast<std::size_t>(j)]] = problem.theta[j];
  out.params.bias = problem.theta[width];
  return out;
}

/// Stacks the feature rows of the annotated points (in annotation order)
/// and their labels. Reads only ids, texts' features and oracle labels.
template <class Scalar>
std::pair<SparseRows<Scalar>, Vector<Scalar>> labeled_rows(const SparseRows<Scalar>& pool_rows, const Pool& pool,
                                                          std::span<const Annotation> annotations) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  Vector<Scalar> y(static_cast<Eigen::Index>(annotations.size()));
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const auto pos = pool.position(annotations[i].point_id);
    if (!pos) throw DataError("annotated point not in pool: " + annotations[i].point_id);
    for (typename SparseRows<Scalar>::InnerIterator it(pool_rows, static_cast<Eigen::Index>(*pos)); it; ++it)
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
    y[static_cast<Eigen::Index>(i)] = is_positive(annotations[i].label) ? Scalar(1) : Scalar(0);
  }
  SparseRows<Scalar> x(static_cast<Eigen::Index>(annotations.size()), pool_rows.cols());
  x.setFromTriplets(triplets.begin(), triplets.end());
  return {std::move(x), std::move(y)};
}

}  // namespace laud

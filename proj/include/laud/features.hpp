#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "laud/core.hpp"
#include "laud/model_options.hpp"

namespace laud {

template <class Scalar>
using SparseRows = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// Pool features: one L2-normalized hashed n-gram row per pool point, in
/// pool order.
using PoolFeatures = SparseRows<double>;

/// Byte offsets of Unicode scalar boundaries, including 0 and text.size().
/// Malformed UTF-8 bytes count as one scalar each.
std::vector<std::size_t> scalar_boundaries(std::string_view text);

/// FNV-1a hash of every character n-gram (over Unicode scalars) of each
/// requested order, in order-major then position-major sequence. Orders
/// longer than the text contribute nothing.
std::vector<std::uint64_t> ngram_hashes(std::string_view text, std::span<const int> orders);

/// Hashed character n-gram counts folded into [0, feature_dim) by masking the
/// low bits of the FNV-1a hash, then L2-normalized. Empty if the text has no
/// n-gram of any requested order.
template <class Scalar = double>
Eigen::SparseVector<Scalar> featurize(std::string_view text, const FeatureSpec& spec) {
  const auto mask = static_cast<std::uint64_t>(spec.feature_dim - 1);
  std::map<Eigen::Index, Scalar> counts;
  for (const auto h : ngram_hashes(text, spec.ngram_orders)) counts[static_cast<Eigen::Index>(h & mask)] += Scalar(1);

  Scalar norm2(0);
  for (const auto& [_, c] : counts) norm2 += c * c;

  Eigen::SparseVector<Scalar> x(static_cast<Eigen::Index>(spec.feature_dim));
  x.reserve(static_cast<Eigen::Index>(counts.size()));
  const Scalar inv = norm2 > Scalar(0) ? Scalar(1) / std::sqrt(norm2) : Scalar(0);
  for (const auto& [slot, c] : counts) x.insertBack(slot) = c * inv;
  return x;
}

PoolFeatures featurize_pool(const Pool& pool, const FeatureSpec& spec);

}  // namespace laud

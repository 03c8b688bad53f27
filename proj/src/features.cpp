#include "laud/features.hpp"

#include "laud/rng.hpp"

namespace laud {

namespace {

// Length of the UTF-8 sequence starting at `i`, or 1 when it is malformed.
std::size_t scalar_length(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) len = 2;
  else if ((lead & 0xF0) == 0xE0) len = 3;
  else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) len = 4;
  else return 1;
  if (i + len > s.size()) return 1;
  for (std::size_t j = 1; j < len; ++j)
    if ((static_cast<unsigned char>(s[i + j]) & 0xC0) != 0x80) return 1;
  return len;
}

}  // namespace

std::vector<std::size_t> scalar_boundaries(std::string_view text) {
  std::vector<std::size_t> b{0};
  for (std::size_t i = 0; i < text.size();) {
    i += scalar_length(text, i);
    b.push_back(i);
  }
  return b;
}

std::vector<std::uint64_t> ngram_hashes(std::string_view text, std::span<const int> orders) {
  const auto b = scalar_boundaries(text);
  const std::size_t scalars = b.size() - 1;
  std::vector<std::uint64_t> out;
  for (const int order : orders) {
    const auto n = static_cast<std::size_t>(order);
    if (n == 0 || n > scalars) continue;
    for (std::size_t i = 0; i + n <= scalars; ++i) out.push_back(fnv1a64(text.substr(b[i], b[i + n] - b[i])));
  }
  return out;
}

PoolFeatures featurize_pool(const Pool& pool, const FeatureSpec& spec) {
  spec.validate();
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < pool.size(); ++r) {
    const auto x = featurize<double>(pool[r].text(), spec);
    for (Eigen::SparseVector<double>::InnerIterator it(x); it; ++it)
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(it.index()), it.value());
  }
  PoolFeatures rows(static_cast<Eigen::Index>(pool.size()), static_cast<Eigen::Index>(spec.feature_dim));
  rows.setFromTriplets(triplets.begin(), triplets.end());
  return rows;
}

}  // namespace laud

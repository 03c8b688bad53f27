#include "laud/oracles.hpp"

#include <chrono>
#include <unordered_map>

#include "laud/errors.hpp"
#include "laud/ground_truth.hpp"
#include "laud/rng.hpp"

namespace laud {

namespace {

Label ground_truth_or_throw(const OracleRequest& req) {
  const auto label = GroundTruth::label_of(req.point);
  if (!label) throw DataError("point " + req.point.id() + " has no ground-truth label");
  return *label;
}

template <class Fn>
std::vector<OracleAnswer> answer_each(std::span<const OracleRequest> batch, Fn&& fn) {
  std::vector<OracleAnswer> out;
  out.reserve(batch.size());
  for (const auto& req : batch) out.push_back(fn(req));
  return out;
}

}  // namespace

OracleAnswer scripted_annotate(const OracleRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  const Label label = ground_truth_or_throw(req);
  return {req.request_id, label, "scripted", std::chrono::steady_clock::now() - start};
}

std::optional<std::vector<OracleAnswer>> ScriptedOracle::request(std::span<const OracleRequest> batch) {
  return answer_each(batch, scripted_annotate);
}

OracleAnswer noisy_annotate(const OracleRequest& req, double flip_probability, std::uint64_t seed) {
  if (!(flip_probability >= 0.0 && flip_probability <= 0.5))
    throw InvalidArgument("flip probability must lie in [0, 0.5]");
  const auto start = std::chrono::steady_clock::now();
  Label label = ground_truth_or_throw(req);
  auto rng = substream(seed, Stream::noise, fnv1a64(req.request_id));
  if (rng.bernoulli(flip_probability)) label = is_positive(label) ? Label::negative : Label::positive;
  return {req.request_id, label, "", std::chrono::steady_clock::now() - start};
}

NoisyOracle::NoisyOracle(double flip_probability, std::uint64_t seed) : flip_(flip_probability), seed_(seed) {
  if (!(flip_ >= 0.0 && flip_ <= 0.5)) throw InvalidArgument("flip probability must lie in [0, 0.5]");
}

std::string NoisyOracle::id() const {
  std::string s = std::to_string(flip_);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.push_back('0');
  return "noisy:" + s;
}

std::optional<std::vector<OracleAnswer>> NoisyOracle::request(std::span<const OracleRequest> batch) {
  const auto oracle_id = id();
  return answer_each(batch, [&](const OracleRequest& req) {
    auto a = noisy_annotate(req, flip_, seed_);
    a.oracle_id = oracle_id;
    return a;
  });
}

std::vector<OracleAnswer> match_answers(std::span<const OracleRequest> batch, std::vector<OracleAnswer> answers) {
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < batch.size(); ++i) slot.emplace(batch[i].request_id, i);
  std::vector<std::optional<OracleAnswer>> placed(batch.size());
  for (auto& a : answers) {
    const auto it = slot.find(a.request_id);
    if (it == slot.end()) throw OracleProtocolError("answer for unknown request", a.request_id);
    if (placed[it->second]) throw OracleProtocolError("duplicate answer", a.request_id);
    placed[it->second] = std::move(a);
  }
  std::vector<OracleAnswer> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!placed[i]) throw OracleProtocolError("missing answer", batch[i].request_id);
    out.push_back(std::move(*placed[i]));
  }
  return out;
}

}  // namespace laud

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laud/core.hpp"

namespace laud {

struct OracleRequest {
  std::string request_id;
  DataPoint point;
  Purpose purpose = Purpose::loop;
  std::string category;
};

struct OracleAnswer {
  std::string request_id;
  Label label = Label::negative;
  std::string oracle_id;
  std::chrono::nanoseconds latency{0};
};

/// The annotation authority. `request` either answers the whole batch or,
/// for oracles that answer asynchronously (a person), returns nullopt and
/// expects to be asked again once answers may have arrived. Throwing means
/// the batch failed as a whole.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::string id() const = 0;
  virtual std::optional<std::vector<OracleAnswer>> request(std::span<const OracleRequest> batch) = 0;
};

/// Answers with the simulation label. Throws DataError for points without one.
class ScriptedOracle final : public Oracle {
 public:
  std::string id() const override { return "scripted"; }
  std::optional<std::vector<OracleAnswer>> request(std::span<const OracleRequest> batch) override;
};

OracleAnswer scripted_annotate(const OracleRequest& req);

/// Ground truth flipped with probability `flip_probability`. Each request
/// draws from its own substream keyed by the request id, so answers do not
/// depend on query order and survive interruption and replay.
class NoisyOracle final : public Oracle {
 public:
  NoisyOracle(double flip_probability, std::uint64_t seed);
  std::string id() const override;
  std::optional<std::vector<OracleAnswer>> request(std::span<const OracleRequest> batch) override;
  double flip_probability() const noexcept { return flip_; }

 private:
  double flip_;
  std::uint64_t seed_;
};

OracleAnswer noisy_annotate(const OracleRequest& req, double flip_probability, std::uint64_t seed);

/// Validates that `answers` covers `batch` exactly once per request id and
/// returns them in batch order.
std::vector<OracleAnswer> match_answers(std::span<const OracleRequest> batch, std::vector<OracleAnswer> answers);

}  // namespace laud

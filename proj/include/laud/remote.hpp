#pragma once

#include <atomic>
#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "laud/oracles.hpp"
#include "laud/prompt.hpp"
#include "laud/zero_shot.hpp"

namespace laud {

/// Where and how to reach a remote model over HTTP. Requests are JSON POSTs;
/// transport failures and 5xx responses are retried with exponential backoff.
struct EndpointConfig {
  std::string url;  // http://host[:port][/path]
  std::chrono::milliseconds timeout{5000};
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  double backoff_multiplier = 2.0;
  std::chrono::milliseconds max_backoff{5000};
  int parallelism = 4;

  void validate() const;
};

/// Remote oracle wire contract.
///   request:  {"request_id": str, "s1": str, "s2": str, "category": str}
///   response: {"request_id": str, "label": 0 | 1}
/// Anything else is an OracleProtocolError carrying the raw body.
OracleAnswer remote_annotate(const OracleRequest& req, const EndpointConfig& endpoint, const PromptTemplate& tmpl,
                             int* retries_used = nullptr);

class RemoteOracle final : public Oracle {
 public:
  RemoteOracle(EndpointConfig endpoint, PromptTemplate tmpl);
  std::string id() const override { return "remote"; }
  /// Queries the batch with at most `parallelism` requests in flight. Any
  /// failure fails the whole batch.
  std::optional<std::vector<OracleAnswer>> request(std::span<const OracleRequest> batch) override;

 private:
  EndpointConfig endpoint_;
  PromptTemplate template_;
};

/// Remote zero-shot scorer wire contract.
///   request:  {"request_id": str, "s1": str, "s2": str, "category": str}
///   response: {"request_id": str, "p_positive": number in [0,1]}
class RemoteScorer final : public Scorer {
 public:
  RemoteScorer(EndpointConfig endpoint, PromptTemplate tmpl);
  std::string id() const override { return "remote"; }
  std::vector<double> score_texts(std::span<const std::string_view> texts) const override;

 private:
  EndpointConfig endpoint_;
  PromptTemplate template_;
};

/// True when GET {base}/status answers 200 within the timeout.
bool service_reachable(const std::string& base_url, std::chrono::milliseconds timeout = std::chrono::milliseconds(1000));

}  // namespace laud

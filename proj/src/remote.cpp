#include "laud/remote.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "laud/errors.hpp"

namespace laud {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0)
    throw InvalidArgument("endpoint URL must start with http://: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

struct PostResult {
  std::string body;
  int retries = 0;
};

// POSTs `payload`, retrying transport errors and 5xx responses. A non-5xx
// error status is a protocol error and is not retried.
PostResult post_with_retry(const EndpointConfig& ep, const std::string& payload) {
  const auto url = split_url(ep.url);
  httplib::Client client(url.origin);
  const auto secs = ep.timeout.count() / 1000;
  const auto usecs = (ep.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  auto backoff = ep.initial_backoff;
  std::string last_failure;
  for (int attempt = 0; attempt <= ep.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::min(ep.max_backoff, std::chrono::milliseconds(static_cast<std::int64_t>(
                                             static_cast<double>(backoff.count()) * ep.backoff_multiplier)));
    }
    auto res = client.Post(url.path, payload, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw OracleProtocolError("endpoint answered HTTP " + std::to_string(res->status), res->body);
    return {res->body, attempt};
  }
  throw OracleTransportError("endpoint " + ep.url + " failed after " + std::to_string(ep.max_retries) +
                             " retries: " + last_failure);
}

nlohmann::json prompt_payload(const std::string& request_id, const PromptTemplate& tmpl, std::string_view text) {
  const auto prompt = render_prompt(tmpl, text);
  return {{"request_id", request_id}, {"s1", prompt.s1}, {"s2", prompt.s2}, {"category", tmpl.category()}};
}

nlohmann::json parse_response(const std::string& body, const std::string& request_id) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw OracleProtocolError("response is not a JSON record", body);
  }
  if (!j.is_object()) throw OracleProtocolError("response is not a JSON record", body);
  if (j.contains("request_id") && j["request_id"] != request_id)
    throw OracleProtocolError("response for a different request", body);
  return j;
}

// Runs fn(i) for i in [0, n) on at most `parallelism` threads, rethrowing the
// first failure after all workers stop.
template <class Fn>
void bounded_parallel(std::size_t n, int parallelism, Fn&& fn) {
  const auto workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(parallelism, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void EndpointConfig::validate() const {
  split_url(url);
  if (timeout.count() <= 0) throw InvalidArgument("endpoint timeout must be positive");
  if (max_retries < 0) throw InvalidArgument("max_retries must be non-negative");
  if (parallelism < 1) throw InvalidArgument("parallelism must be at least 1");
  if (backoff_multiplier < 1.0) throw InvalidArgument("backoff multiplier must be >= 1");
}

OracleAnswer remote_annotate(const OracleRequest& req, const EndpointConfig& endpoint, const PromptTemplate& tmpl,
                             int* retries_used) {
  const auto start = std::chrono::steady_clock::now();
  const auto result = post_with_retry(endpoint, prompt_payload(req.request_id, tmpl, req.point.text()).dump());
  const auto j = parse_response(result.body, req.request_id);
  const auto it = j.find("label");
  if (it == j.end()) throw OracleProtocolError("response has no label", result.body);
  Label label;
  if (it->is_boolean()) label = to_label(it->get<bool>());
  else if (it->is_number_integer() && (*it == 0 || *it == 1)) label = to_label(*it == 1);
  else throw OracleProtocolError("label must be 0 or 1", result.body);
  if (retries_used) *retries_used = result.retries;
  return {req.request_id, label, "remote", std::chrono::steady_clock::now() - start};
}

RemoteOracle::RemoteOracle(EndpointConfig endpoint, PromptTemplate tmpl)
    : endpoint_(std::move(endpoint)), template_(std::move(tmpl)) {
  endpoint_.validate();
}

std::optional<std::vector<OracleAnswer>> RemoteOracle::request(std::span<const OracleRequest> batch) {
  std::vector<OracleAnswer> out(batch.size());
  bounded_parallel(batch.size(), endpoint_.parallelism,
                   [&](std::size_t i) { out[i] = remote_annotate(batch[i], endpoint_, template_); });
  return out;
}

RemoteScorer::RemoteScorer(EndpointConfig endpoint, PromptTemplate tmpl)
    : endpoint_(std::move(endpoint)), template_(std::move(tmpl)) {
  endpoint_.validate();
}

std::vector<double> RemoteScorer::score_texts(std::span<const std::string_view> texts) const {
  std::vector<double> out(texts.size());
  bounded_parallel(texts.size(), endpoint_.parallelism, [&](std::size_t i) {
    const auto request_id = "score:" + std::to_string(i);
    const auto result = post_with_retry(endpoint_, prompt_payload(request_id, template_, texts[i]).dump());
    const auto j = parse_response(result.body, request_id);
    const auto it = j.find("p_positive");
    if (it == j.end() || !it->is_number()) throw OracleProtocolError("response has no numeric p_positive", result.body);
    const double p = it->get<double>();
    if (!(p >= 0.0 && p <= 1.0)) throw OracleProtocolError("p_positive outside [0,1]", result.body);
    out[i] = p;
  });
  return out;
}

bool service_reachable(const std::string& base_url, std::chrono::milliseconds timeout) {
  try {
    const auto url = split_url(base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    const auto prefix = url.path == "/" ? std::string() : url.path;
    const auto res = client.Get(prefix + "/status");
    return res && res->status == 200;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace laud

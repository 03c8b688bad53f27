#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "laud/core.hpp"
#include "laud/oracles.hpp"

namespace laud {

struct QueueEntry {
  std::string request_id;
  PointId point_id;
  std::string text;
  std::string category;
  Purpose purpose = Purpose::loop;
  std::size_t position = 0;  // enqueue order
  std::optional<Label> answer;
};

/// Requests waiting on a person. Every enqueue and every accepted answer is
/// appended to an event log (when a path is given) and fsynced before the
/// call returns, so a restarted process sees exactly the acknowledged state.
/// Safe for concurrent submitters.
class HumanQueue {
 public:
  HumanQueue() = default;
  explicit HumanQueue(std::filesystem::path log_path);
  ~HumanQueue();
  HumanQueue(const HumanQueue&) = delete;
  HumanQueue& operator=(const HumanQueue&) = delete;

  /// Adds the requests not already known. Re-enqueueing is a no-op.
  void enqueue(std::span<const OracleRequest> batch);

  /// First answer wins. Throws ConflictError("unknown_request" or
  /// "already_answered").
  void submit(const std::string& request_id, Label label);

  /// Outstanding (unanswered) requests in enqueue order.
  std::vector<QueueEntry> pending() const;

  /// All answers for the batch, or nullopt while any is outstanding.
  std::optional<std::vector<OracleAnswer>> answers_for(std::span<const OracleRequest> batch) const;

  bool knows(const std::string& request_id) const;

 private:
  void append_event(const std::string& line);

  mutable std::mutex mu_;
  std::vector<QueueEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::filesystem::path path_;
  int fd_ = -1;
};

/// A person answering through the queue. Defers (returns nullopt) until the
/// whole batch has been answered.
class HumanOracle final : public Oracle {
 public:
  explicit HumanOracle(HumanQueue& queue) : queue_(queue) {}
  std::string id() const override { return "human"; }
  std::optional<std::vector<OracleAnswer>> request(std::span<const OracleRequest> batch) override;

 private:
  HumanQueue& queue_;
};

}  // namespace laud

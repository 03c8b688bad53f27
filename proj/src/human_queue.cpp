#include "laud/human_queue.hpp"

#include <json.hpp>

#include "laud/durable_file.hpp"
#include "laud/errors.hpp"

namespace laud {

namespace {
constexpr std::string_view kFormat = "laud-human-queue";
}

HumanQueue::HumanQueue(std::filesystem::path log_path) : path_(std::move(log_path)) {
  const auto scan = scan_lines(path_);
  fd_ = open_append(path_);
  if (scan.torn_tail) truncate_file(fd_, scan.complete_bytes);
  if (scan.lines.empty()) {
    write_durably(fd_, nlohmann::ordered_json{{"format", kFormat}, {"version", 1}}.dump() + "\n");
    return;
  }
  try {
    const auto header = nlohmann::json::parse(scan.lines.front());
    if (header.value("format", "") != kFormat) throw DataError("not a human queue log: " + path_.string());
    for (std::size_t i = 1; i < scan.lines.size(); ++i) {
      const auto ev = nlohmann::json::parse(scan.lines[i]);
      const auto kind = ev.at("event").get<std::string>();
      const auto id = ev.at("request_id").get<std::string>();
      if (kind == "enqueue") {
        QueueEntry e{id,
                     ev.at("point_id").get<std::string>(),
                     ev.at("text").get<std::string>(),
                     ev.at("category").get<std::string>(),
                     parse_purpose(ev.at("purpose").get<std::string>()),
                     entries_.size(),
                     std::nullopt};
        index_.emplace(id, entries_.size());
        entries_.push_back(std::move(e));
      } else if (kind == "answer") {
        entries_.at(index_.at(id)).answer = to_label(ev.at("label").get<bool>());
      } else {
        throw DataError("unknown human queue event: " + kind);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt human queue log " + path_.string() + ": " + e.what());
  } catch (const std::out_of_range&) {
    throw DataError("human queue log answers an unknown request: " + path_.string());
  }
}

HumanQueue::~HumanQueue() { close_fd(fd_); }

void HumanQueue::append_event(const std::string& line) {
  if (fd_ >= 0) write_durably(fd_, line);
}

void HumanQueue::enqueue(std::span<const OracleRequest> batch) {
  std::lock_guard lock(mu_);
  std::string lines;
  std::vector<QueueEntry> added;
  for (const auto& req : batch) {
    if (index_.contains(req.request_id)) continue;
    QueueEntry e{req.request_id, req.point.id(), req.point.text(), req.category, req.purpose,
                 entries_.size() + added.size(), std::nullopt};
    lines += nlohmann::ordered_json{{"event", "enqueue"},
                                    {"request_id", e.request_id},
                                    {"point_id", e.point_id},
                                    {"text", e.text},
                                    {"category", e.category},
                                    {"purpose", to_string(e.purpose)}}
                 .dump() +
             "\n";
    added.push_back(std::move(e));
  }
  if (added.empty()) return;
  append_event(lines);
  for (auto& e : added) {
    index_.emplace(e.request_id, entries_.size());
    entries_.push_back(std::move(e));
  }
}

void HumanQueue::submit(const std::string& request_id, Label label) {
  std::lock_guard lock(mu_);
  const auto it = index_.find(request_id);
  if (it == index_.end()) throw ConflictError("unknown_request", request_id);
  auto& entry = entries_[it->second];
  if (entry.answer) throw ConflictError("already_answered", request_id);
  append_event(nlohmann::ordered_json{{"event", "answer"}, {"request_id", request_id}, {"label", is_positive(label)}}
                   .dump() +
               "\n");
  entry.answer = label;
}

std::vector<QueueEntry> HumanQueue::pending() const {
  std::lock_guard lock(mu_);
  std::vector<QueueEntry> out;
  for (const auto& e : entries_)
    if (!e.answer) out.push_back(e);
  return out;
}

std::optional<std::vector<OracleAnswer>> HumanQueue::answers_for(std::span<const OracleRequest> batch) const {
  std::lock_guard lock(mu_);
  std::vector<OracleAnswer> out;
  out.reserve(batch.size());
  for (const auto& req : batch) {
    const auto it = index_.find(req.request_id);
    if (it == index_.end() || !entries_[it->second].answer) return std::nullopt;
    out.push_back({req.request_id, *entries_[it->second].answer, "human", {}});
  }
  return out;
}

bool HumanQueue::knows(const std::string& request_id) const {
  std::lock_guard lock(mu_);
  return index_.contains(request_id);
}

std::optional<std::vector<OracleAnswer>> HumanOracle::request(std::span<const OracleRequest> batch) {
  queue_.enqueue(batch);
  return queue_.answers_for(batch);
}

}  // namespace laud

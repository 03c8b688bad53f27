#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "laud/core.hpp"
#include "laud/run_config.hpp"
#include "laud/serialization.hpp"

namespace httplib {
class Server;
}

namespace laud {

struct ServiceOptions {
  std::filesystem::path root;  // run directories live in root/<run_id>
  Clock clock = system_clock_ms;
};

/// What readers see: an immutable copy published after every mutation.
struct RunView {
  std::string run_id;
  RunState state;
  std::string oracle;
  std::optional<std::string> error;  // last failure; the run stops advancing until resumed
};

/// One run at a time, owned by a single worker thread. Mutations (start,
/// resume, annotation arrival) are queued to that thread; readers get the
/// latest published RunView and never block the worker for long.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Creates root/<run_id>, writes config.json and starts advancing. Throws
  /// ConflictError("run_active") while another run is unfinished and
  /// ConflictError("run_exists") when the directory already holds a run.
  RunView start_run(const RunConfig& config);
  /// Reloads root/<run_id> from its snapshot and logs and continues it.
  RunView resume_run(const std::string& run_id);

  /// Records a human answer. ConflictError reasons: "wrong_phase" (no run is
  /// waiting on people), "unknown_request", "already_answered".
  void submit(const std::string& request_id, Label label);

  std::shared_ptr<const RunView> view() const;
  /// Outstanding human requests in enqueue order (empty unless the run's
  /// oracle is the human queue).
  std::vector<QueueEntry> candidates() const;

  /// Blocks until every queued command has been processed.
  void wait_idle();

 private:
  struct ActiveRun;

  void post(std::function<void()> command);
  void worker_loop();
  void advance_active();
  void publish();
  std::shared_ptr<ActiveRun> open_run(const RunConfig& config, const std::filesystem::path& dir, bool fresh);

  ServiceOptions options_;
  std::shared_ptr<ActiveRun> active_;  // worker-owned once started

  mutable std::mutex view_mu_;
  std::shared_ptr<const RunView> view_;
  std::shared_ptr<HumanQueue> queue_;  // shared with readers/submitters

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> commands_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

/// HTTP front end. All bodies are JSON.
///   GET  /status            {run_id, phase, iteration, model_version, budget_used, budget, pending, oracle, error?}
///   GET  /candidates        [{request_id, point_id, text, category, purpose, position}]
///   POST /annotations       {request_id, label: 0|1|true|false}  -> 200 | 400 {error} | 409 {error, request_id}
///   POST /runs              run config                           -> 201 status | 409 {error}
///   POST /runs/{id}/resume                                       -> 200 status | 404 | 409
///   GET  /evaluation        report | 404 {error: "not_yet_estimated"}
///   GET  /iterations        [IterationRecord]
class ApiServer {
 public:
  explicit ApiServer(Service& service);
  ~ApiServer();

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

Record status_record(const RunView& view);

/// Parses "host:port" (LAUD_LISTEN). Defaults to 127.0.0.1:8080.
std::pair<std::string, int> listen_address(const char* env_value);

}  // namespace laud

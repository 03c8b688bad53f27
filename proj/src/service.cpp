#include "laud/service.hpp"

#include "laud/dataset.hpp"
#include "laud/errors.hpp"
#include "laud/human_queue.hpp"
#include "laud/loop.hpp"
#include "laud/store.hpp"

// After the Eigen headers: <resolv.h> defines a `res` macro.
#include <httplib.h>

namespace laud {

// Declaration order matters: the controller refers to everything above it.
struct Service::ActiveRun {
  RunConfig config;
  std::filesystem::path dir;
  Pool pool;
  std::unique_ptr<Scorer> scorer;
  std::shared_ptr<HumanQueue> queue;
  std::unique_ptr<Oracle> oracle;
  std::unique_ptr<Oracle> auditor;
  std::unique_ptr<RunStore> store;
  std::unique_ptr<LoopController> controller;
  std::optional<std::string> error;
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  std::filesystem::create_directories(options_.root);
  worker_ = std::thread([this] { worker_loop(); });
}

Service::~Service() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void Service::post(std::function<void()> command) {
  {
    std::lock_guard lock(mu_);
    commands_.push_back(std::move(command));
  }
  cv_.notify_all();
}

void Service::worker_loop() {
  std::unique_lock lock(mu_);
  for (;;) {
    cv_.wait(lock, [this] { return stopping_ || !commands_.empty(); });
    if (commands_.empty()) return;
    auto command = std::move(commands_.front());
    commands_.pop_front();
    busy_ = true;
    lock.unlock();
    command();
    lock.lock();
    busy_ = false;
    cv_.notify_all();
  }
}

void Service::wait_idle() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return commands_.empty() && !busy_; });
}

void Service::advance_active() {
  if (!active_) return;
  try {
    active_->controller->advance();
    active_->error.reset();
  } catch (const std::exception& e) {
    active_->error = e.what();
  }
  publish();
}

void Service::publish() {
  auto view = std::make_shared<RunView>();
  if (active_) {
    view->run_id = active_->config.run_id;
    view->state = active_->controller->state();
    view->oracle = active_->oracle->id();
    view->error = active_->error;
  }
  std::lock_guard lock(view_mu_);
  view_ = std::move(view);
}

std::shared_ptr<const RunView> Service::view() const {
  std::lock_guard lock(view_mu_);
  return view_;
}

std::vector<QueueEntry> Service::candidates() const {
  std::shared_ptr<HumanQueue> queue;
  {
    std::lock_guard lock(view_mu_);
    queue = queue_;
  }
  return queue ? queue->pending() : std::vector<QueueEntry>{};
}

std::shared_ptr<Service::ActiveRun> Service::open_run(const RunConfig& config, const std::filesystem::path& dir,
                                                      bool fresh) {
  auto run = std::make_shared<ActiveRun>();
  run->config = config;
  run->dir = dir;
  run->pool = load_pool(config.dataset);
  run->scorer = make_scorer(config);
  run->queue = std::make_shared<HumanQueue>(dir / RunStore::kHumanQueue);
  run->oracle = make_oracle(config.oracle, config, run->queue.get());
  if (config.evaluation_oracle) run->auditor = make_oracle(*config.evaluation_oracle, config, run->queue.get());
  run->store = std::make_unique<RunStore>(dir);

  LoopOptions loop;
  loop.store = run->store.get();
  loop.evaluation_oracle = run->auditor.get();
  loop.clock = options_.clock;
  if (fresh) {
    run->controller = std::make_unique<LoopController>(run->pool, *run->scorer, *run->oracle, config.loop, loop);
  } else {
    auto state = run->store->recover();
    if (!state) throw DataError("run directory has no state snapshot: " + dir.string());
    run->controller =
        std::make_unique<LoopController>(std::move(*state), run->pool, *run->scorer, *run->oracle, loop);
  }
  return run;
}

namespace {
bool unfinished(const std::shared_ptr<const RunView>& v) {
  return v && !v->run_id.empty() && v->state.phase != Phase::done && !v->error;
}
}  // namespace

RunView Service::start_run(const RunConfig& config) {
  config.validate();
  wait_idle();
  if (unfinished(view())) throw ConflictError("run_active", view()->run_id);
  const auto dir = options_.root / config.run_id;
  if (std::filesystem::exists(dir / RunStore::kSnapshot)) throw ConflictError("run_exists", config.run_id);
  std::filesystem::create_directories(dir);
  save_run_config(dir / RunStore::kConfig, config);

  auto run = open_run(config, dir, true);
  RunView initial{config.run_id, run->controller->state(), run->oracle->id(), std::nullopt};
  {
    std::lock_guard lock(view_mu_);
    queue_ = run->queue;
    view_ = std::make_shared<RunView>(initial);
  }
  post([this, run] {
    active_ = run;
    advance_active();
  });
  return initial;
}

RunView Service::resume_run(const std::string& run_id) {
  const auto dir = options_.root / run_id;
  if (!std::filesystem::exists(dir / RunStore::kConfig)) throw InvalidArgument("no run named " + run_id);
  wait_idle();
  const auto current = view();
  if (unfinished(current) && current->run_id != run_id) throw ConflictError("run_active", current->run_id);

  auto run = open_run(load_run_config(dir / RunStore::kConfig), dir, false);
  RunView recovered{run_id, run->controller->state(), run->oracle->id(), std::nullopt};
  {
    std::lock_guard lock(view_mu_);
    queue_ = run->queue;
    view_ = std::make_shared<RunView>(recovered);
  }
  post([this, run] {
    active_ = run;
    advance_active();
  });
  return recovered;
}

void Service::submit(const std::string& request_id, Label label) {
  const auto v = view();
  std::shared_ptr<HumanQueue> queue;
  {
    std::lock_guard lock(view_mu_);
    queue = queue_;
  }
  const bool waiting = v && (v->state.phase == Phase::awaiting_annotations || v->state.phase == Phase::evaluating);
  if (!queue || !waiting) throw ConflictError("wrong_phase", request_id);
  queue->submit(request_id, label);
  post([this] { advance_active(); });
}

Record status_record(const RunView& v) {
  Record r{{"run_id", v.run_id.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v.run_id)},
           {"phase", v.run_id.empty() ? std::string("idle") : std::string(to_string(v.state.phase))},
           {"iteration", v.state.iteration},
           {"model_version", v.state.model_version},
           {"budget_used", v.state.budget_used()},
           {"budget", v.run_id.empty() ? 0 : v.state.config.budget()},
           {"pending", v.state.pending.size()},
           {"oracle", v.oracle}};
  if (v.error) r["error"] = *v.error;
  return r;
}

std::pair<std::string, int> listen_address(const char* env_value) {
  std::string value = env_value && *env_value ? env_value : "127.0.0.1:8080";
  const auto colon = value.rfind(':');
  if (colon == std::string::npos || colon + 1 == value.size()) throw InvalidArgument("LAUD_LISTEN must be host:port");
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(value.substr(colon + 1), &used);
    if (used != value.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvalidArgument("LAUD_LISTEN port is not a number: " + value);
  }
  if (port < 0 || port > 65535) throw InvalidArgument("LAUD_LISTEN port out of range");
  return {value.substr(0, colon), port};
}

namespace {

void reply(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

nlohmann::ordered_json error_body(std::string_view error, std::string_view detail = {}) {
  nlohmann::ordered_json j{{"error", error}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

std::optional<Label> parse_label(const nlohmann::json& j) {
  if (j.is_boolean()) return j.get<bool>() ? Label::positive : Label::negative;
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v == 0 || v == 1) return v == 1 ? Label::positive : Label::negative;
  }
  return std::nullopt;
}

}  // namespace

ApiServer::ApiServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Get("/status", [this](const httplib::Request&, httplib::Response& res) {
    const auto v = service_.view();
    reply(res, 200, status_record(v ? *v : RunView{}));
  });

  s.Get("/candidates", [this](const httplib::Request&, httplib::Response& res) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& e : service_.candidates())
      out.push_back({{"request_id", e.request_id},
                     {"point_id", e.point_id},
                     {"text", e.text},
                     {"category", e.category},
                     {"purpose", to_string(e.purpose)},
                     {"position", e.position}});
    reply(res, 200, out);
  });

  s.Post("/annotations", [this](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      return reply(res, 400, error_body("malformed", "body is not JSON"));
    }
    if (!body.is_object() || !body.contains("request_id") || !body["request_id"].is_string())
      return reply(res, 400, error_body("malformed", "request_id must be a string"));
    const auto id = body["request_id"].get<std::string>();
    const auto label = body.contains("label") ? parse_label(body["label"]) : std::nullopt;
    if (!label) return reply(res, 400, error_body("malformed", "label must be 0, 1, true or false"));
    try {
      service_.submit(id, *label);
    } catch (const ConflictError& e) {
      return reply(res, 409, {{"error", e.reason()}, {"request_id", e.request_id()}});
    }
    reply(res, 200, {{"request_id", id}, {"label", is_positive(*label) ? 1 : 0}});
  });

  s.Post("/runs", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto config = run_config_from(nlohmann::json::parse(req.body));
      reply(res, 201, status_record(service_.start_run(config)));
    } catch (const nlohmann::json::exception&) {
      reply(res, 400, error_body("malformed", "body is not JSON"));
    } catch (const ConflictError& e) {
      reply(res, 409, {{"error", e.reason()}, {"run_id", e.request_id()}});
    } catch (const Error& e) {
      reply(res, 400, error_body("invalid_config", e.what()));
    }
  });

  s.Post(R"(/runs/([^/]+)/resume)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    try {
      reply(res, 200, status_record(service_.resume_run(id)));
    } catch (const ConflictError& e) {
      reply(res, 409, {{"error", e.reason()}, {"run_id", e.request_id()}});
    } catch (const InvalidArgument& e) {
      reply(res, 404, error_body("unknown_run", e.what()));
    } catch (const Error& e) {
      reply(res, 422, error_body("unrecoverable", e.what()));
    }
  });

  s.Get("/evaluation", [this](const httplib::Request&, httplib::Response& res) {
    const auto v = service_.view();
    if (!v || !v->state.evaluation) return reply(res, 404, error_body("not_yet_estimated"));
    reply(res, 200, to_record(*v->state.evaluation));
  });

  s.Get("/iterations", [this](const httplib::Request&, httplib::Response& res) {
    auto out = nlohmann::ordered_json::array();
    if (const auto v = service_.view())
      for (const auto& r : v->state.records) out.push_back(to_record(r));
    reply(res, 200, out);
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw InvalidArgument("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw InvalidArgument("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::serve() { server_->listen_after_bind(); }

void ApiServer::stop() {
  if (server_) server_->stop();
}

}  // namespace laud

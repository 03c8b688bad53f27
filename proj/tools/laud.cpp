// laud: command-line front door for runs, evaluation, comparison, synthetic
// corpora and the annotation service.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "laud/dataset.hpp"
#include "laud/durable_file.hpp"
#include "laud/errors.hpp"
#include "laud/evaluation.hpp"
#include "laud/loop.hpp"
#include "laud/run_config.hpp"
#include "laud/service.hpp"
#include "laud/store.hpp"
#include "laud/synth.hpp"

#include <CLI11.hpp>
#include <httplib.h>

namespace {

using namespace laud;

enum Exit { ok = 0, failure = 1, usage = 2, data = 3, oracle = 4, invariant = 5 };

struct RunFlags {
  std::string config, dataset, category, strategy, oracle, eval_oracle, lexicon, out, service, run_id;
  std::optional<int> k, max_iters, n_eval, epochs;
  std::optional<std::uint64_t> seed;
  std::optional<double> temperature, threshold, lr;
  std::optional<std::int64_t> fixed_clock;
};

RunConfig build_config(const RunFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.dataset.empty()) c.dataset = f.dataset;
  if (!f.category.empty()) c.loop.category = f.category;
  if (!f.strategy.empty()) c.loop.strategy = parse_strategy(f.strategy);
  if (!f.oracle.empty()) c.oracle = OracleSpec::parse(f.oracle);
  if (!f.eval_oracle.empty()) c.evaluation_oracle = OracleSpec::parse(f.eval_oracle);
  if (!f.lexicon.empty()) c.lexicon = f.lexicon;
  if (!f.run_id.empty()) c.run_id = f.run_id;
  if (f.k) c.loop.k = *f.k;
  if (f.max_iters) c.loop.max_iterations = *f.max_iters;
  if (f.n_eval) c.loop.n_eval = *f.n_eval;
  if (f.epochs) c.loop.model.training.epochs = *f.epochs;
  if (f.seed) c.loop.seed = *f.seed;
  if (f.temperature) c.temperature = *f.temperature;
  if (f.threshold) c.loop.decision_threshold = *f.threshold;
  if (f.lr) c.loop.model.training.adam.lr = *f.lr;
  if (c.oracle.kind == OracleSpec::Kind::remote) c.endpoint.url = c.oracle.url;
  if (c.dataset.empty()) throw InvalidArgument("--dataset is required (or set \"dataset\" in --config)");
  c.validate();
  return c;
}

Clock clock_for(const RunFlags& f) {
  if (!f.fixed_clock) return system_clock_ms;
  const auto t = *f.fixed_clock;
  return [t] { return t; };
}

void print_report(const EvaluationReport& r, const std::string& category) {
  std::cout << "Category: " << category << "\nMethod: " << r.method << "\nOracle: " << r.oracle_id
            << "\nEstimated precision: " << format_precision(r.estimated_precision) << " (" << r.n_true_positive_in_sample
            << "/" << r.n_sampled << ")\n#Inferred-Positive: " << r.inferred_positive_count << '\n';
}

std::string service_base(const std::string& flag) {
  if (!flag.empty()) return flag;
  const auto [host, port] = listen_address(std::getenv("LAUD_LISTEN"));
  return "http://" + host + ":" + std::to_string(port);
}

int cmd_run_human(RunConfig config, const std::string& service_flag) {
  const auto base = service_base(service_flag);
  if (!service_reachable(base))
    throw InvalidArgument("the human oracle needs the annotation service, which is not reachable at " + base +
                          "; start it with `laud serve` and retry");
  config.dataset = std::filesystem::absolute(config.dataset);
  if (!config.lexicon.empty()) config.lexicon = std::filesystem::absolute(config.lexicon);
  httplib::Client client(base);
  const auto res = client.Post("/runs", to_record(config).dump(), "application/json");
  if (!res) throw OracleTransportError("service at " + base + " did not answer");
  std::cout << res->body << '\n';
  if (res->status == 201) {
    std::cout << "run " << config.run_id << " started; label candidates through " << base << "/candidates\n";
    return ok;
  }
  return res->status == 409 ? failure : usage;
}

int cmd_run(const RunFlags& flags) {
  auto config = build_config(flags);
  if (config.oracle.kind == OracleSpec::Kind::human) return cmd_run_human(config, flags.service);
  if (flags.out.empty()) throw InvalidArgument("--out is required");

  const std::filesystem::path dir = flags.out;
  std::filesystem::create_directories(dir);
  const auto pool = load_pool(config.dataset);
  const auto scorer = make_scorer(config);
  const auto trainer = make_oracle(config.oracle, config);
  const auto auditor = config.evaluation_oracle ? make_oracle(*config.evaluation_oracle, config) : nullptr;
  RunStore store(dir);
  save_run_config(dir / RunStore::kConfig, config);

  LoopOptions options;
  options.store = &store;
  options.evaluation_oracle = auditor.get();
  options.clock = clock_for(flags);
  const auto result = run_loop(pool, *scorer, *trainer, config.loop, std::move(options));

  std::cout << "annotations: " << result.state.annotations.size() << "\nmodel versions: " << result.state.model_version
            << '\n';
  if (result.state.evaluation) print_report(*result.state.evaluation, config.loop.category);
  std::cout << "run directory: " << dir.string() << '\n';
  return ok;
}

int cmd_evaluate(const std::string& run_dir, const std::string& oracle_flag, std::optional<int> n_eval,
                 std::optional<std::int64_t> fixed_clock) {
  const std::filesystem::path dir = run_dir;
  if (!std::filesystem::exists(dir / RunStore::kConfig)) throw InvalidArgument("not a run directory: " + run_dir);
  const auto config = load_run_config(dir / RunStore::kConfig);
  RunStore store(dir);
  auto state = store.recover();
  if (!state) throw DataError("run directory has no state snapshot: " + run_dir);
  if (state->model_version < state->config.max_iterations + 1)
    throw InvalidArgument("run has not finished training (model version " + std::to_string(state->model_version) +
                          "); resume it first");

  const auto pool = load_pool(config.dataset);
  const auto scorer = make_scorer(config);
  const auto spec = !oracle_flag.empty()       ? OracleSpec::parse(oracle_flag)
                    : config.evaluation_oracle ? *config.evaluation_oracle
                                               : config.oracle;
  if (spec.kind == OracleSpec::Kind::human)
    throw InvalidArgument("human evaluation runs through the service; use POST /runs/" + config.run_id + "/resume");
  const auto auditor = make_oracle(spec, config);
  const auto trainer = make_oracle(config.oracle.kind == OracleSpec::Kind::human ? spec : config.oracle, config);

  LoopOptions options;
  options.evaluate = false;
  if (fixed_clock) options.clock = [t = *fixed_clock] { return t; };
  LoopController controller(*state, pool, *scorer, *trainer, options);
  const auto& cfg = state->config;
  const auto inferred = infer_positives(controller.model(), pool, controller.features(), cfg.decision_threshold);
  auto report = estimate_precision(inferred, pool, *auditor, n_eval.value_or(cfg.n_eval), cfg.seed, cfg.category,
                                   cfg.decision_threshold);
  report.method = method_name(cfg.strategy);
  store.write_evaluation(report);
  print_report(report, cfg.category);
  return ok;
}

int cmd_zeroshot(const RunFlags& flags) {
  auto config = build_config(flags);
  if (flags.out.empty()) throw InvalidArgument("--out is required");
  if (config.oracle.kind == OracleSpec::Kind::human) throw InvalidArgument("zeroshot needs a synchronous oracle");
  const std::filesystem::path dir = flags.out;
  std::filesystem::create_directories(dir);
  const auto pool = load_pool(config.dataset);
  const auto scorer = make_scorer(config);
  const auto auditor = make_oracle(config.evaluation_oracle.value_or(config.oracle), config);
  const auto inferred = infer_positives(score_pool(*scorer, pool), config.loop.decision_threshold);
  auto report = estimate_precision(inferred, pool, *auditor, config.loop.n_eval, config.loop.seed,
                                   config.loop.category, config.loop.decision_threshold);
  report.method = "LLM+ZL";
  RunStore store(dir);
  save_run_config(dir / RunStore::kConfig, config);
  store.write_evaluation(report);
  print_report(report, config.loop.category);
  return ok;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& category) {
  if (dirs.size() < 2) throw InvalidArgument("compare needs at least two run directories");
  std::vector<NamedReport> reports;
  std::string cat = category;
  for (const auto& d : dirs) {
    const std::filesystem::path dir = d;
    if (!std::filesystem::exists(dir / RunStore::kEvaluationReport))
      throw InvalidArgument("no evaluation in " + d + "; run `laud evaluate --run " + d + "` first");
    auto report = evaluation_report_from(nlohmann::json::parse(read_file(dir / RunStore::kEvaluationReport)));
    if (cat.empty() && std::filesystem::exists(dir / RunStore::kConfig))
      cat = load_run_config(dir / RunStore::kConfig).loop.category;
    reports.push_back({report.method, std::move(report)});
  }
  print_comparison(std::cout, compare_methods(reports), cat);
  return ok;
}

int cmd_synth(const SynthOptions& options, const std::string& out, const std::string& lexicon_out) {
  const auto pool = synthesize_pool(options);
  if (out.empty() || out == "-") {
    write_pool(std::cout, pool);
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw DataError("cannot write " + out);
    write_pool(file, pool);
  }
  if (!lexicon_out.empty()) {
    std::ofstream file(lexicon_out, std::ios::binary);
    if (!file) throw DataError("cannot write " + lexicon_out);
    write_lexicon(file, synthetic_lexicon(options.category));
  }
  return ok;
}

ApiServer* g_server = nullptr;

int cmd_serve(const std::string& root, const std::string& resume_id) {
  const auto [host, port] = listen_address(std::getenv("LAUD_LISTEN"));
  Service service({root, system_clock_ms});
  if (!resume_id.empty()) service.resume_run(resume_id);
  ApiServer server(service);
  const int bound = server.bind(host, port);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "laud service on http://" << host << ":" << bound << " (runs in " << root << ")\n";
  server.serve();
  g_server = nullptr;
  return ok;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "run config file (JSON)");
  cmd->add_option("--dataset", f.dataset, "JSONL pool: {id, text, label?} per line");
  cmd->add_option("--category", f.category, "target category");
  cmd->add_option("--k", f.k, "batch size (even)");
  cmd->add_option("--max-iters", f.max_iters, "loop iterations after cold start");
  cmd->add_option("--n-eval", f.n_eval, "audit sample size");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--strategy", f.strategy, "uncertainty | random | confident_zero_shot");
  cmd->add_option("--oracle", f.oracle, "scripted | noisy:Q | remote:URL | human");
  cmd->add_option("--eval-oracle", f.eval_oracle, "oracle for the precision audit (default: --oracle)");
  cmd->add_option("--lexicon", f.lexicon, "zero-shot lexicon (term<TAB>weight<TAB>+|-)");
  cmd->add_option("--temperature", f.temperature, "lexicon temperature");
  cmd->add_option("--threshold", f.threshold, "decision threshold");
  cmd->add_option("--epochs", f.epochs, "training epochs");
  cmd->add_option("--lr", f.lr, "Adam learning rate");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--run-id", f.run_id, "run name (service runs)");
  cmd->add_option("--fixed-clock", f.fixed_clock, "stamp every record with this time (ms)")->group("");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LAUD: active learning with an LLM oracle"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run the labeling loop and write a run directory");
  add_run_flags(run, run_flags);
  run->add_option("--service", run_flags.service, "service base URL for --oracle human");

  std::string eval_dir, eval_oracle;
  std::optional<int> eval_n;
  std::optional<std::int64_t> eval_clock;
  auto* evaluate = app.add_subcommand("evaluate", "estimate the precision of a finished run");
  evaluate->add_option("--run", eval_dir, "run directory")->required();
  evaluate->add_option("--oracle", eval_oracle, "auditing oracle (default: the run's)");
  evaluate->add_option("--n-eval", eval_n, "audit sample size");
  evaluate->add_option("--fixed-clock", eval_clock)->group("");

  RunFlags zs_flags;
  auto* zeroshot = app.add_subcommand("zeroshot", "estimate the precision of the zero-shot scorer alone");
  add_run_flags(zeroshot, zs_flags);

  std::vector<std::string> compare_dirs;
  std::string compare_category;
  auto* compare = app.add_subcommand("compare", "comparison table over evaluated run directories");
  compare->add_option("runs", compare_dirs, "run directories");
  compare->add_option("--category", compare_category, "category shown in the table header");

  SynthOptions synth_opts;
  std::string synth_out, synth_lexicon;
  auto* synth = app.add_subcommand("synth", "generate a synthetic commodity corpus");
  synth->add_option("--size", synth_opts.size, "number of items");
  synth->add_option("--positive-fraction", synth_opts.positive_fraction);
  synth->add_option("--ambiguous-fraction", synth_opts.ambiguous_fraction);
  synth->add_option("--seed", synth_opts.seed);
  synth->add_option("--category", synth_opts.category, "coffee | tea");
  synth->add_option("--out", synth_out, "output JSONL (default stdout)");
  synth->add_option("--lexicon-out", synth_lexicon, "also write the matching zero-shot lexicon");

  std::string serve_root = "runs", serve_resume;
  auto* serve = app.add_subcommand("serve", "annotation service (listen address from LAUD_LISTEN)");
  serve->add_option("--root", serve_root, "directory holding run directories");
  serve->add_option("--resume", serve_resume, "run id to resume on start");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*evaluate) return cmd_evaluate(eval_dir, eval_oracle, eval_n, eval_clock);
    if (*zeroshot) return cmd_zeroshot(zs_flags);
    if (*compare) return cmd_compare(compare_dirs, compare_category);
    if (*synth) return cmd_synth(synth_opts, synth_out, synth_lexicon);
    if (*serve) return cmd_serve(serve_root, serve_resume);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const OracleError& e) {
    std::cerr << "oracle error: " << e.what() << '\n';
    return oracle;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return data;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return invariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}

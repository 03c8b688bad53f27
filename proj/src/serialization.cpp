#include "laud/serialization.hpp"

#include "laud/errors.hpp"

namespace laud {

namespace {

constexpr std::string_view kStateFormat = "laud-state";
constexpr int kStateVersion = 1;

template <class Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed " + std::string(what) + ": " + e.what());
  }
}

}  // namespace

Record to_record(const LoopConfig& c) {
  const auto& f = c.model.features;
  const auto& t = c.model.training;
  return Record{{"k", c.k},
                {"max_iterations", c.max_iterations},
                {"n_eval", c.n_eval},
                {"seed", c.seed},
                {"strategy", to_string(c.strategy)},
                {"decision_threshold", c.decision_threshold},
                {"category", c.category},
                {"model",
                 {{"ngram_orders", f.ngram_orders},
                  {"feature_dim", f.feature_dim},
                  {"epochs", t.epochs},
                  {"batch_size", t.batch_size},
                  {"warm_start", t.warm_start},
                  {"lr", t.adam.lr},
                  {"beta1", t.adam.beta1},
                  {"beta2", t.adam.beta2},
                  {"weight_decay", t.adam.weight_decay},
                  {"epsilon", t.adam.epsilon}}}};
}

LoopConfig loop_config_from(const nlohmann::json& j) {
  return guarded("loop config", [&] {
    LoopConfig c;
    c.k = j.value("k", c.k);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.n_eval = j.value("n_eval", c.n_eval);
    c.seed = j.value("seed", c.seed);
    if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
    c.decision_threshold = j.value("decision_threshold", c.decision_threshold);
    c.category = j.value("category", c.category);
    if (j.contains("model")) {
      const auto& m = j["model"];
      auto& f = c.model.features;
      auto& t = c.model.training;
      f.ngram_orders = m.value("ngram_orders", f.ngram_orders);
      f.feature_dim = m.value("feature_dim", f.feature_dim);
      t.epochs = m.value("epochs", t.epochs);
      t.batch_size = m.value("batch_size", t.batch_size);
      t.warm_start = m.value("warm_start", t.warm_start);
      t.adam.lr = m.value("lr", t.adam.lr);
      t.adam.beta1 = m.value("beta1", t.adam.beta1);
      t.adam.beta2 = m.value("beta2", t.adam.beta2);
      t.adam.weight_decay = m.value("weight_decay", t.adam.weight_decay);
      t.adam.epsilon = m.value("epsilon", t.adam.epsilon);
    }
    return c;
  });
}

Record to_record(const Annotation& a) {
  return Record{{"point_id", a.point_id},
                {"label", is_positive(a.label)},
                {"oracle_id", a.oracle_id},
                {"iteration", a.iteration},
                {"created_at_ms", a.created_at_ms}};
}

Annotation annotation_from(const nlohmann::json& j) {
  return guarded("annotation", [&] {
    return Annotation{j.at("point_id").get<std::string>(), to_label(j.at("label").get<bool>()),
                      j.at("oracle_id").get<std::string>(), j.at("iteration").get<int>(),
                      j.value("created_at_ms", std::int64_t{0})};
  });
}

Record to_record(const PendingQuery& q) {
  return Record{{"request_id", q.request_id},
                {"point_id", q.point_id},
                {"purpose", to_string(q.purpose)},
                {"iteration", q.iteration}};
}

PendingQuery pending_query_from(const nlohmann::json& j) {
  return guarded("pending query", [&] {
    return PendingQuery{j.at("request_id").get<std::string>(), j.at("point_id").get<std::string>(),
                        parse_purpose(j.at("purpose").get<std::string>()), j.at("iteration").get<int>()};
  });
}

Record to_record(const IterationRecord& r) {
  return Record{{"iteration", r.iteration},
                {"selected_ids", r.selected_ids},
                {"annotations_added", r.annotations_added},
                {"model_version", r.model_version},
                {"train_loss_final", r.train_loss_final}};
}

IterationRecord iteration_record_from(const nlohmann::json& j) {
  return guarded("iteration record", [&] {
    return IterationRecord{j.at("iteration").get<int>(), j.at("selected_ids").get<std::vector<std::string>>(),
                           j.at("annotations_added").get<int>(), j.at("model_version").get<int>(),
                           j.at("train_loss_final").get<double>()};
  });
}

Record to_record(const EvaluationReport& r) {
  Record out{{"method", r.method},
             {"oracle_id", r.oracle_id},
             {"n_sampled", r.n_sampled},
             {"n_true_positive_in_sample", r.n_true_positive_in_sample},
             {"estimated_precision", nullptr},
             {"inferred_positive_count", r.inferred_positive_count},
             {"decision_threshold", r.decision_threshold},
             {"seed", r.seed}};
  if (r.estimated_precision) out["estimated_precision"] = *r.estimated_precision;
  return out;
}

EvaluationReport evaluation_report_from(const nlohmann::json& j) {
  return guarded("evaluation report", [&] {
    EvaluationReport r;
    r.method = j.value("method", "");
    r.oracle_id = j.value("oracle_id", "");
    r.n_sampled = j.at("n_sampled").get<int>();
    r.n_true_positive_in_sample = j.at("n_true_positive_in_sample").get<int>();
    if (j.contains("estimated_precision") && !j["estimated_precision"].is_null())
      r.estimated_precision = j["estimated_precision"].get<double>();
    r.inferred_positive_count = j.at("inferred_positive_count").get<std::size_t>();
    r.decision_threshold = j.value("decision_threshold", 0.5);
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  });
}

Record to_record(const RunState& s) {
  Record annotations = Record::array();
  for (const auto& a : s.annotations) annotations.push_back(to_record(a));
  Record pending = Record::array();
  for (const auto& q : s.pending) pending.push_back(to_record(q));
  Record records = Record::array();
  for (const auto& r : s.records) records.push_back(to_record(r));
  return Record{{"format", kStateFormat},
                {"version", kStateVersion},
                {"config", to_record(s.config)},
                {"phase", to_string(s.phase)},
                {"iteration", s.iteration},
                {"model_version", s.model_version},
                {"annotations", std::move(annotations)},
                {"pending", std::move(pending)},
                {"iterations", std::move(records)},
                {"evaluation", s.evaluation ? to_record(*s.evaluation) : Record(nullptr)}};
}

RunState run_state_from(const nlohmann::json& j) {
  return guarded("state snapshot", [&] {
    if (j.value("format", "") != kStateFormat) throw DataError("not a state snapshot");
    if (j.value("version", 0) != kStateVersion)
      throw DataError("unsupported snapshot version " + std::to_string(j.value("version", 0)));
    RunState s;
    s.config = loop_config_from(j.at("config"));
    s.phase = parse_phase(j.at("phase").get<std::string>());
    s.iteration = j.at("iteration").get<int>();
    s.model_version = j.at("model_version").get<int>();
    for (const auto& a : j.at("annotations")) s.annotations.push_back(annotation_from(a));
    for (const auto& q : j.at("pending")) s.pending.push_back(pending_query_from(q));
    for (const auto& r : j.at("iterations")) s.records.push_back(iteration_record_from(r));
    if (!j.at("evaluation").is_null()) s.evaluation = evaluation_report_from(j["evaluation"]);
    return s;
  });
}

std::string serialize_state(const RunState& s) { return to_record(s).dump(2) + "\n"; }

RunState deserialize_state(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("state snapshot is not valid JSON: ") + e.what());
  }
  return run_state_from(j);
}

}  // namespace laud

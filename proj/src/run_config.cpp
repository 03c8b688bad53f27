#include "laud/run_config.hpp"

#include <charconv>
#include <fstream>

#include "laud/durable_file.hpp"
#include "laud/errors.hpp"

namespace laud {

namespace {

double parse_probability(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw InvalidArgument("noisy oracle needs a number, got '" + std::string(text) + "'");
  return value;
}

std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

OracleSpec OracleSpec::parse(std::string_view text) {
  OracleSpec s;
  if (text == "scripted") return s;
  if (text == "human") {
    s.kind = Kind::human;
    return s;
  }
  if (text.starts_with("noisy:")) {
    s.kind = Kind::noisy;
    s.flip_probability = parse_probability(text.substr(6));
    if (!(s.flip_probability >= 0.0 && s.flip_probability <= 0.5))
      throw InvalidArgument("flip probability must be in [0, 0.5]");
    return s;
  }
  if (text.starts_with("remote:")) {
    s.kind = Kind::remote;
    s.url = std::string(text.substr(7));
    if (s.url.empty()) throw InvalidArgument("remote oracle needs a URL");
    return s;
  }
  throw InvalidArgument("unknown oracle '" + std::string(text) + "' (scripted, noisy:Q, remote:URL, human)");
}

std::string OracleSpec::to_string() const {
  switch (kind) {
    case Kind::scripted:
      return "scripted";
    case Kind::noisy:
      return "noisy:" + shortest(flip_probability);
    case Kind::remote:
      return "remote:" + url;
    case Kind::human:
      return "human";
  }
  return "scripted";
}

ScorerSpec ScorerSpec::parse(std::string_view text) {
  ScorerSpec s;
  if (text == "lexicon") return s;
  if (text.starts_with("remote:") && text.size() > 7) {
    s.kind = Kind::remote;
    s.url = std::string(text.substr(7));
    return s;
  }
  throw InvalidArgument("unknown scorer '" + std::string(text) + "' (lexicon, remote:URL)");
}

std::string ScorerSpec::to_string() const { return kind == Kind::lexicon ? "lexicon" : "remote:" + url; }

void RunConfig::validate() const {
  loop.validate();
  if (run_id.empty() || run_id.find_first_of("/\\") != std::string::npos || run_id == "." || run_id == "..")
    throw InvalidArgument("run_id must be a plain name");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be positive");
  if (oracle.kind == OracleSpec::Kind::remote || scorer.kind == ScorerSpec::Kind::remote) endpoint.validate();
  prompt_template();
}

PromptTemplate RunConfig::prompt_template() const { return PromptTemplate(s1_template, s2_template, loop.category); }

Record to_record(const RunConfig& c) {
  Record r{{"run_id", c.run_id},
           {"dataset", c.dataset.string()},
           {"oracle", c.oracle.to_string()}};
  if (c.evaluation_oracle) r["evaluation_oracle"] = c.evaluation_oracle->to_string();
  r["scorer"] = c.scorer.to_string();
  r["lexicon"] = c.lexicon.string();
  r["temperature"] = c.temperature;
  r["s1_template"] = c.s1_template;
  r["s2_template"] = c.s2_template;
  r["endpoint"] = Record{{"timeout_ms", c.endpoint.timeout.count()},
                         {"max_retries", c.endpoint.max_retries},
                         {"initial_backoff_ms", c.endpoint.initial_backoff.count()},
                         {"backoff_multiplier", c.endpoint.backoff_multiplier},
                         {"max_backoff_ms", c.endpoint.max_backoff.count()},
                         {"parallelism", c.endpoint.parallelism}};
  const Record loop = to_record(c.loop);
  for (auto& [key, value] : loop.items()) r[key] = value;
  return r;
}

RunConfig run_config_from(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("run config must be an object");
  RunConfig c;
  c.loop = loop_config_from(j);
  try {
    c.run_id = j.value("run_id", c.run_id);
    c.dataset = j.value("dataset", std::string{});
    if (j.contains("oracle")) c.oracle = OracleSpec::parse(j["oracle"].get<std::string>());
    if (j.contains("evaluation_oracle") && !j["evaluation_oracle"].is_null())
      c.evaluation_oracle = OracleSpec::parse(j["evaluation_oracle"].get<std::string>());
    if (j.contains("scorer")) c.scorer = ScorerSpec::parse(j["scorer"].get<std::string>());
    c.lexicon = j.value("lexicon", std::string{});
    c.temperature = j.value("temperature", c.temperature);
    c.s1_template = j.value("s1_template", c.s1_template);
    c.s2_template = j.value("s2_template", c.s2_template);
    if (j.contains("endpoint")) {
      const auto& e = j["endpoint"];
      auto& ep = c.endpoint;
      ep.timeout = std::chrono::milliseconds(e.value("timeout_ms", ep.timeout.count()));
      ep.max_retries = e.value("max_retries", ep.max_retries);
      ep.initial_backoff = std::chrono::milliseconds(e.value("initial_backoff_ms", ep.initial_backoff.count()));
      ep.backoff_multiplier = e.value("backoff_multiplier", ep.backoff_multiplier);
      ep.max_backoff = std::chrono::milliseconds(e.value("max_backoff_ms", ep.max_backoff.count()));
      ep.parallelism = e.value("parallelism", ep.parallelism);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed run config: ") + e.what());
  }
  if (c.oracle.kind == OracleSpec::Kind::remote) c.endpoint.url = c.oracle.url;
  if (c.scorer.kind == ScorerSpec::Kind::remote && c.endpoint.url.empty()) c.endpoint.url = c.scorer.url;
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const auto text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return run_config_from(j);
}

void save_run_config(const std::filesystem::path& path, const RunConfig& c) {
  replace_file_atomically(path, to_record(c).dump(2) + "\n");
}

ZeroShotLexicon category_lexicon(const std::string& category, double temperature) {
  ZeroShotLexicon lex;
  lex.positive_terms.push_back({category, 2.0});
  lex.temperature = temperature;
  return lex;
}

std::unique_ptr<Scorer> make_scorer(const RunConfig& c) {
  if (c.scorer.kind == ScorerSpec::Kind::remote) {
    auto ep = c.endpoint;
    ep.url = c.scorer.url;
    return std::make_unique<RemoteScorer>(ep, c.prompt_template());
  }
  auto lex = c.lexicon.empty() ? category_lexicon(c.loop.category, c.temperature)
                               : load_lexicon(c.lexicon, c.temperature);
  return std::make_unique<LexiconScorer>(std::move(lex));
}

std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec, const RunConfig& c, HumanQueue* queue) {
  switch (spec.kind) {
    case OracleSpec::Kind::scripted:
      return std::make_unique<ScriptedOracle>();
    case OracleSpec::Kind::noisy:
      return std::make_unique<NoisyOracle>(spec.flip_probability, c.loop.seed);
    case OracleSpec::Kind::remote: {
      auto ep = c.endpoint;
      ep.url = spec.url;
      return std::make_unique<RemoteOracle>(ep, c.prompt_template());
    }
    case OracleSpec::Kind::human:
      if (!queue) throw InvalidArgument("the human oracle needs a queue");
      return std::make_unique<HumanOracle>(*queue);
  }
  throw InvalidArgument("unknown oracle kind");
}

}  // namespace laud

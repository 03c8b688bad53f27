#include "laud/dataset.hpp"

#include <fstream>
#include <string>
#include <unordered_set>

#include <json.hpp>

#include "laud/errors.hpp"
#include "laud/ground_truth.hpp"

namespace laud {

Pool ingest_pool(std::istream& in) {
  std::vector<DataPoint> points;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + "malformed record (" + e.what() + ")");
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string() || !rec.contains("text") ||
        !rec["text"].is_string())
      throw DataError(where + "record needs string fields 'id' and 'text'");
    std::optional<bool> label;
    if (rec.contains("label") && !rec["label"].is_null()) {
      if (!rec["label"].is_boolean()) throw DataError(where + "'label' must be boolean");
      label = rec["label"].get<bool>();
    }
    auto id = rec["id"].get<std::string>();
    auto text = rec["text"].get<std::string>();
    if (text.empty()) throw DataError(where + "empty text for id " + id);
    if (!seen.insert(id).second) throw DataError(where + "duplicate id: " + id);
    points.emplace_back(std::move(id), std::move(text), label);
  }
  return Pool(std::move(points));
}

Pool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  return ingest_pool(in);
}

void write_pool(std::ostream& out, const Pool& pool) {
  for (const auto& p : pool) {
    nlohmann::ordered_json rec{{"id", p.id()}, {"text", p.text()}};
    if (const auto l = GroundTruth::label_of(p)) rec["label"] = is_positive(*l);
    out << rec.dump() << '\n';
  }
}

}  // namespace laud

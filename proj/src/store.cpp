#include "laud/store.hpp"

#include <sstream>

#include "laud/durable_file.hpp"
#include "laud/errors.hpp"
#include "laud/evaluation.hpp"
#include "laud/serialization.hpp"

namespace laud {

namespace {

constexpr std::string_view kLogFormat = "laud-annotation-log";
constexpr int kLogVersion = 1;

std::string_view kind_name(AnnotationLog::Kind k) {
  return k == AnnotationLog::Kind::training ? "training" : "evaluation";
}

bool is_training(Purpose p) { return p == Purpose::coldstart || p == Purpose::loop; }

}  // namespace

AnnotationLog::AnnotationLog(std::filesystem::path path, Kind kind) : path_(std::move(path)), kind_(kind) {
  const auto scan = scan_lines(path_);
  fd_ = open_append(path_);
  if (scan.torn_tail) truncate_file(fd_, scan.complete_bytes);
  end_ = scan.complete_bytes;
  if (scan.lines.empty()) {
    const auto header =
        Record{{"format", kLogFormat}, {"version", kLogVersion}, {"kind", kind_name(kind_)}}.dump() + "\n";
    if (end_ != 0) truncate_file(fd_, 0);
    write_durably(fd_, header);
    end_ = header.size();
    return;
  }
  try {
    const auto header = nlohmann::json::parse(scan.lines.front());
    if (header.value("format", "") != kLogFormat || header.value("kind", "") != kind_name(kind_))
      throw DataError("unexpected header in " + path_.string());
    if (header.value("version", 0) != kLogVersion) throw DataError("unsupported log version in " + path_.string());
    for (std::size_t i = 1; i < scan.lines.size(); ++i) {
      const auto j = nlohmann::json::parse(scan.lines[i]);
      AnnotationLogRecord rec{j.at("seq").get<std::uint64_t>(), annotation_from(j),
                              parse_purpose(j.at("purpose").get<std::string>())};
      if (rec.sequence_no != records_.size() + 1)
        throw DataError("sequence gap at line " + std::to_string(i + 1) + " of " + path_.string());
      if (kind_ == Kind::training && !training_ids_.insert(rec.annotation.point_id).second)
        throw DataError("duplicate training annotation for " + rec.annotation.point_id + " in " + path_.string());
      records_.push_back(std::move(rec));
      offsets_.push_back(scan.offsets[i]);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt annotation log " + path_.string() + ": " + e.what());
  }
}

AnnotationLog::~AnnotationLog() { close_fd(fd_); }

std::vector<std::uint64_t> AnnotationLog::append(std::span<const Annotation> batch, Purpose purpose) {
  if ((kind_ == Kind::training) != is_training(purpose))
    throw InvalidArgument(std::string("purpose ") + std::string(to_string(purpose)) + " does not belong in the " +
                          std::string(kind_name(kind_)) + " log");
  if (kind_ == Kind::training) {
    IdSet batch_ids;
    for (const auto& a : batch)
      if (training_ids_.contains(a.point_id) || !batch_ids.insert(a.point_id).second)
        throw InvariantViolation("point " + a.point_id + " is already annotated");
  }

  std::string bytes;
  std::vector<std::uint64_t> seqs;
  std::vector<std::uint64_t> offsets;
  std::uint64_t cursor = end_;
  for (const auto& a : batch) {
    const auto seq = records_.size() + seqs.size() + 1;
    Record line{{"seq", seq}, {"purpose", to_string(purpose)}};
    line.update(to_record(a));
    const auto text = line.dump() + "\n";
    offsets.push_back(cursor);
    cursor += text.size();
    bytes += text;
    seqs.push_back(seq);
  }
  write_durably(fd_, bytes);
  end_ = cursor;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    records_.push_back({seqs[i], batch[i], purpose});
    offsets_.push_back(offsets[i]);
    if (kind_ == Kind::training) training_ids_.insert(batch[i].point_id);
  }
  return seqs;
}

std::vector<Annotation> AnnotationLog::annotations() const {
  std::vector<Annotation> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.annotation);
  return out;
}

void AnnotationLog::truncate(std::size_t count) {
  if (count >= records_.size()) return;
  truncate_file(fd_, offsets_[count]);
  end_ = offsets_[count];
  for (std::size_t i = count; i < records_.size(); ++i) training_ids_.erase(records_[i].annotation.point_id);
  records_.resize(count);
  offsets_.resize(count);
}

RunStore::RunStore(std::filesystem::path dir)
    : dir_((std::filesystem::create_directories(dir), std::move(dir))),
      training_(dir_ / kTrainingLog, AnnotationLog::Kind::training),
      evaluation_(dir_ / kEvaluationLog, AnnotationLog::Kind::evaluation) {}

bool RunStore::has_snapshot() const { return std::filesystem::exists(dir_ / kSnapshot); }

void RunStore::write_snapshot(const RunState& state) { replace_file_atomically(dir_ / kSnapshot, serialize_state(state)); }

std::optional<RunState> RunStore::read_snapshot() const {
  if (!has_snapshot()) return std::nullopt;
  return deserialize_state(read_file(dir_ / kSnapshot));
}

void RunStore::write_iterations(std::span<const IterationRecord> records) {
  std::string text;
  for (const auto& r : records) text += to_record(r).dump() + "\n";
  replace_file_atomically(dir_ / kIterations, text);
}

std::vector<IterationRecord> RunStore::read_iterations() const {
  std::vector<IterationRecord> out;
  if (!std::filesystem::exists(dir_ / kIterations)) return out;
  std::istringstream in(read_file(dir_ / kIterations));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(iteration_record_from(nlohmann::json::parse(line)));
  return out;
}

void RunStore::write_evaluation(const EvaluationReport& report) {
  replace_file_atomically(dir_ / kEvaluationReport, to_record(report).dump(2) + "\n");
  std::ostringstream text;
  text << "Method: " << report.method << "\nOracle: " << report.oracle_id << "\nSampled: " << report.n_sampled
       << "\nTrue positives in sample: " << report.n_true_positive_in_sample
       << "\nEstimated precision: " << format_precision(report.estimated_precision)
       << "\n#Inferred-Positive: " << report.inferred_positive_count << "\nDecision threshold: "
       << report.decision_threshold << '\n';
  if (report.no_positives_inferred()) text << "No positives inferred: precision is undefined.\n";
  replace_file_atomically(dir_ / kEvaluationText, text.str());
}

std::optional<EvaluationReport> RunStore::read_evaluation() const {
  if (!std::filesystem::exists(dir_ / kEvaluationReport)) return std::nullopt;
  return evaluation_report_from(nlohmann::json::parse(read_file(dir_ / kEvaluationReport)));
}

std::optional<RunState> RunStore::recover() {
  auto snapshot = read_snapshot();
  if (!snapshot) {
    if (training_.size() > 0) throw DataError("annotation log without a state snapshot in " + dir_.string());
    return std::nullopt;
  }
  RunState state = std::move(*snapshot);
  const auto k = static_cast<std::size_t>(state.config.k);

  // Batches must be k records of consecutive iterations 0, 1, 2, ...
  const auto& recs = training_.records();
  std::size_t complete = 0;
  while (complete < recs.size()) {
    const int iteration = recs[complete].annotation.iteration;
    if (iteration != static_cast<int>(complete / k))
      throw DataError("annotation log batch out of order at seq " + std::to_string(recs[complete].sequence_no));
    std::size_t end = complete;
    while (end < recs.size() && recs[end].annotation.iteration == iteration) ++end;
    if (end - complete > k) throw DataError("annotation log batch larger than k at iteration " + std::to_string(iteration));
    if (end - complete < k) {
      if (end != recs.size()) throw DataError("short batch inside annotation log");
      break;
    }
    complete = end;
  }
  training_.truncate(complete);

  const auto logged = training_.annotations();
  if (state.annotations.size() > logged.size())
    throw DataError("state snapshot is ahead of the annotation log in " + dir_.string());
  for (std::size_t i = 0; i < state.annotations.size(); ++i)
    if (!same_content(state.annotations[i], logged[i]))
      throw DataError("state snapshot disagrees with the annotation log at seq " + std::to_string(i + 1));

  if (logged.size() > state.annotations.size()) {
    state.annotations = logged;
    state.iteration = logged.back().iteration;
    state.model_version = state.iteration;
    state.phase = Phase::training;
    state.pending.clear();
    std::erase_if(state.records, [&](const IterationRecord& r) { return r.iteration > state.iteration; });
    state.evaluation.reset();
  }
  if (state.phase != Phase::done) {
    evaluation_.truncate(0);
    state.evaluation.reset();
  }
  return state;
}

}  // namespace laud

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "laud/core.hpp"

namespace laud {

struct AnnotationLogRecord {
  std::uint64_t sequence_no = 0;
  Annotation annotation;
  Purpose purpose = Purpose::loop;
};

/// Append-only, newline-delimited annotation log. The first line is a
/// schema header; every later line is one record with a dense sequence
/// number starting at 1. A batch is acknowledged once it has been written
/// and fsynced; earlier bytes are never rewritten.
class AnnotationLog {
 public:
  enum class Kind { training, evaluation };

  AnnotationLog(std::filesystem::path path, Kind kind);
  ~AnnotationLog();
  AnnotationLog(const AnnotationLog&) = delete;
  AnnotationLog& operator=(const AnnotationLog&) = delete;

  /// Validates the whole batch, then appends it durably. A training log
  /// rejects a point that already has a coldstart/loop annotation
  /// (InvariantViolation) and evaluation-purpose records.
  std::vector<std::uint64_t> append(std::span<const Annotation> batch, Purpose purpose);

  const std::vector<AnnotationLogRecord>& records() const noexcept { return records_; }
  std::vector<Annotation> annotations() const;
  std::size_t size() const noexcept { return records_.size(); }

  /// Drops records past `count`. Only for discarding a batch that was never
  /// acknowledged (crash mid-append).
  void truncate(std::size_t count);

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  Kind kind_;
  int fd_ = -1;
  std::vector<AnnotationLogRecord> records_;
  std::vector<std::uint64_t> offsets_;  // byte offset of each record line
  std::uint64_t end_ = 0;
  IdSet training_ids_;
};

/// One run directory:
///   state.snapshot      full RunState, rewritten atomically at every phase change
///   annotations.log     training annotations (coldstart + loop)
///   evaluation.log      evaluation audit answers, never used for training
///   iterations.report   one IterationRecord per line
///   evaluation.report   machine-readable EvaluationReport
///   evaluation.txt      the same as a plain-text table
class RunStore {
 public:
  static constexpr const char* kSnapshot = "state.snapshot";
  static constexpr const char* kTrainingLog = "annotations.log";
  static constexpr const char* kEvaluationLog = "evaluation.log";
  static constexpr const char* kIterations = "iterations.report";
  static constexpr const char* kEvaluationReport = "evaluation.report";
  static constexpr const char* kEvaluationText = "evaluation.txt";
  static constexpr const char* kHumanQueue = "human_queue.log";
  static constexpr const char* kConfig = "config.json";

  explicit RunStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  AnnotationLog& training_log() noexcept { return training_; }
  AnnotationLog& evaluation_log() noexcept { return evaluation_; }

  bool has_snapshot() const;
  void write_snapshot(const RunState& state);
  std::optional<RunState> read_snapshot() const;

  void write_iterations(std::span<const IterationRecord> records);
  std::vector<IterationRecord> read_iterations() const;

  void write_evaluation(const EvaluationReport& report);
  std::optional<EvaluationReport> read_evaluation() const;

  /// Rebuilds the run from the last snapshot plus the training-log suffix
  /// written after it. A trailing training batch shorter than k, and any
  /// evaluation answers of an evaluation that did not finish, are
  /// unacknowledged and are truncated away. Returns nullopt for a directory
  /// without a snapshot.
  std::optional<RunState> recover();

 private:
  std::filesystem::path dir_;
  AnnotationLog training_;
  AnnotationLog evaluation_;
};

}  // namespace laud

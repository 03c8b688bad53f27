#pragma once

#include <csignal>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "laud/loop.hpp"
#include "laud/serialization.hpp"
#include "laud/store.hpp"
#include "support.hpp"

namespace laud::test {

// Everything a run leaves on disk, as bytes.
struct RunFiles {
  std::string training_log, evaluation_log, iterations, evaluation, snapshot;
  friend bool operator==(const RunFiles&, const RunFiles&) = default;
};

inline RunFiles run_files(const std::filesystem::path& dir) {
  auto read = [&](const char* name) {
    return std::filesystem::exists(dir / name) ? slurp(dir / name) : std::string("<missing>");
  };
  return {read(RunStore::kTrainingLog), read(RunStore::kEvaluationLog), read(RunStore::kIterations),
          read(RunStore::kEvaluationReport), read(RunStore::kSnapshot)};
}

struct CrashScenario {
  const Pool* pool = nullptr;
  const Scorer* scorer = nullptr;
  LoopConfig config;
  std::function<std::unique_ptr<Oracle>()> make_oracle;
  std::shared_ptr<const PoolFeatures> features;

  LoopOptions options(RunStore& store, std::function<void(std::string_view)> checkpoint = {}) const {
    LoopOptions o;
    o.store = &store;
    o.clock = [] { return std::int64_t{0}; };
    o.features = features;
    o.checkpoint = std::move(checkpoint);
    return o;
  }
};

struct SimulatedCrash {};

// Uninterrupted run; returns the number of checkpoints passed.
inline int reference_run(const CrashScenario& sc, const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  int count = 0;
  RunStore store(dir);
  auto oracle = sc.make_oracle();
  run_loop(*sc.pool, *sc.scorer, *oracle, sc.config, sc.options(store, [&](std::string_view) { ++count; }));
  return count;
}

// Reopens the directory the way a restarted process would and finishes the run.
inline void recover_and_finish(const CrashScenario& sc, const std::filesystem::path& dir) {
  RunStore store(dir);
  auto state = store.recover();
  auto oracle = sc.make_oracle();
  if (!state) {
    run_loop(*sc.pool, *sc.scorer, *oracle, sc.config, sc.options(store));
    return;
  }
  resume(std::move(*state), *sc.pool, *sc.scorer, *oracle, sc.options(store));
}

// Throws out of the controller at checkpoint `at`, then recovers.
inline void crash_by_exception(const CrashScenario& sc, const std::filesystem::path& dir, int at) {
  std::filesystem::remove_all(dir);
  {
    RunStore store(dir);
    auto oracle = sc.make_oracle();
    int seen = 0;
    try {
      run_loop(*sc.pool, *sc.scorer, *oracle, sc.config, sc.options(store, [&](std::string_view) {
                 if (seen++ == at) throw SimulatedCrash{};
               }));
    } catch (const SimulatedCrash&) {
    }
  }
  recover_and_finish(sc, dir);
}

// A child process runs the loop and SIGKILLs itself at checkpoint `at`; the
// parent recovers from whatever reached the disk. Returns false if the child
// did not die as planned.
inline bool crash_by_kill(const CrashScenario& sc, const std::filesystem::path& dir, int at) {
  std::filesystem::remove_all(dir);
  const pid_t pid = ::fork();
  if (pid == 0) {
    RunStore store(dir);
    auto oracle = sc.make_oracle();
    int seen = 0;
    run_loop(*sc.pool, *sc.scorer, *oracle, sc.config, sc.options(store, [&](std::string_view) {
               if (seen++ == at) ::kill(::getpid(), SIGKILL);
             }));
    ::_exit(0);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (!WIFSIGNALED(status) || WTERMSIG(status) != SIGKILL) return false;
  recover_and_finish(sc, dir);
  return true;
}

}  // namespace laud::test

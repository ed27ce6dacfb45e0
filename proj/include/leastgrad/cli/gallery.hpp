#pragma once

#include <string>
#include <vector>

#include "leastgrad/cli/problem.hpp"
#include "leastgrad/report.hpp"

namespace leastgrad::cli {

enum class Task { Solve, Barrier, Perimeter, Imaging };

const char* to_string(Task t);

/// How an expected value was obtained: read off the problem directly, or
/// worked out analytically / by an independent computation (see the note).
enum class Provenance { ByInspection, Derived };

const char* to_string(Provenance p);

/// A bound on one number of the entry's report, addressed by JSON pointer.
struct Expectation {
  std::string pointer;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  Provenance provenance = Provenance::ByInspection;
  std::string note;
};

struct GalleryEntry {
  std::string id;
  std::string description;
  Task task = Task::Solve;
  ProblemSpec spec;
  std::vector<Expectation> expected;
};

const std::vector<GalleryEntry>& gallery();
/// Throws DomainError for an unknown id.
const GalleryEntry& gallery_entry(const std::string& id);

struct CheckResult {
  const Expectation* expectation = nullptr;
  double value = 0.0;
  bool passed = false;
};

struct GalleryOutcome {
  Json report;  // the task's report plus a "checks" array
  std::vector<CheckResult> checks;
  bool passed = true;
};

/// Runs the entry's task and compares against its expectations. When `out` is
/// given the task's files and report.json are written there.
GalleryOutcome gallery_run(const GalleryEntry& entry, const std::optional<std::filesystem::path>& out = {});

}  // namespace leastgrad::cli

#pragma once

#include <filesystem>

#include "leastgrad/solver.hpp"

namespace leastgrad {

/// A checkpoint is a directory holding u.csv, u_bar.csv, V_x.csv, V_y.csv and
/// mask.csv in the field format, plus checkpoint.json with the iteration
/// counter, step sizes and gap history. Every file is written atomically.
void save_checkpoint(const std::filesystem::path& dir, const SolverState& state);

/// Throws DomainError on missing or inconsistent files.
SolverState load_checkpoint(const std::filesystem::path& dir);

}  // namespace leastgrad

#pragma once

#include <filesystem>

#include "navsim/runlog.hpp"

namespace navsim {

// One row per control step, header row first. Column order: t, vehicle-major
// state blocks, navigator output and derivatives, references z, controls u,
// error coordinates eta, attack magnitude, trim-switch counters, then the
// averaged metrics. Floats serialized with 17 significant digits so that
// parse(emit(log)) reproduces the log exactly.
void write_csv(const RunLog& log, const std::filesystem::path& path);

RunLog read_csv(const std::filesystem::path& path);

}  // namespace navsim

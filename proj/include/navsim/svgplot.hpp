#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "navsim/runlog.hpp"

namespace navsim {

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

// Self-contained SVG line chart, axes auto-scaled. log_y plots log10 of the
// values (clamped at 1e-16).
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, bool log_y = false);

// Planar vehicle paths plus the navigator trajectory.
void write_trajectory_plot(const std::filesystem::path& path, const std::string& title,
                           const RunLog& log);

}  // namespace navsim

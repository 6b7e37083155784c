#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sssn/panel.hpp"

namespace sssn {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_number(double value);

/// Rows are time points, columns are components. A first line with any
/// non-numeric cell is taken as a header and skipped; blank lines are
/// ignored. ParseError (with the 1-based line number) on non-numeric or
/// non-finite cells and ragged rows.
[[nodiscard]] PanelSeries read_panel_csv(std::istream& in, std::string_view source = "<input>");
[[nodiscard]] PanelSeries read_panel_csv(const std::filesystem::path& path);

/// Writes with shortest round-trip formatting; header cells are x1..xp.
void write_panel_csv(const PanelSeries& panel, std::ostream& out, bool header = false);
void write_panel_csv(const PanelSeries& panel, const std::filesystem::path& path, bool header = false);

}  // namespace sssn

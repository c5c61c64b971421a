#pragma once

#include <istream>
#include <string>

#include "gbf/core.hpp"

namespace gbf::io {

/// Reads a `t,c` CSV. Blank lines are skipped and CRLF is accepted.
/// Errors name the offending line (the header is line 1).
ConcentrationSeries read_concentration_csv(std::istream& in, ConcentrationUnit unit);
ConcentrationSeries read_concentration_csv_file(const std::string& path, ConcentrationUnit unit);

/// printf-style "%.6g".
std::string format_g6(double v);

}  // namespace gbf::io

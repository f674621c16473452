#pragma once

#include <string>

#include "deepsupp/bar.hpp"

namespace deepsupp {

// Loads a one-ticker OHLCV CSV. The header row must name the
// date/open/high/low/close/volume columns (case-insensitive, any order,
// extra columns ignored). Rows are sorted by timestamp on load.
//
// Hard errors (std::runtime_error): missing file, missing header column,
// unparsable row (reported with its line number), bar invariant violations
// (all offending rows listed), duplicate timestamps.
BarSeries load_ohlcv_csv(const std::string& path, const std::string& ticker);

// Writes the canonical schema: date,open,high,low,close,volume with
// ISO dates and %.17g numbers, so a reload reproduces the series exactly.
void write_ohlcv_csv(const BarSeries& series, const std::string& path);

}  // namespace deepsupp

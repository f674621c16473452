#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace deepsupp {

// One OHLCV bar. Timestamps are epoch seconds (UTC); daily bars sit at
// midnight so they render back to plain ISO dates.
struct Bar {
    std::int64_t timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
};

// Returns an empty string when the bar is valid, otherwise a description of
// the violated invariant.
std::string bar_violation(const Bar& bar);

struct BarSeries {
    std::string ticker;
    std::vector<Bar> bars;

    std::size_t size() const { return bars.size(); }
};

// Throws std::runtime_error when the series violates its invariants
// (empty, non-increasing or duplicate timestamps, bad bars).
void check_series(const BarSeries& series);

enum class FindingKind { Gap, ZeroVolumeRun, ConstantPriceRun };

struct Finding {
    FindingKind kind;
    std::size_t first = 0;  // bar index range, inclusive
    std::size_t last = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool clean() const { return findings.empty(); }
};

// Advisory data-quality scan: timestamp gaps (> 3x the median spacing),
// zero-volume runs (>= 2 bars) and constant-close runs (>= 20 bars, which
// would degenerate the rolling rank correlations). Never mutates the series.
ValidationReport validate_series(const BarSeries& series);

// Calendar helpers (proleptic Gregorian, UTC).
std::int64_t days_from_civil(int y, int m, int d);
void civil_from_days(std::int64_t z, int& y, int& m, int& d);

// Parses "YYYY-MM-DD" to epoch seconds at UTC midnight, or a plain integer
// as epoch seconds. Throws std::runtime_error on anything else.
std::int64_t parse_timestamp(const std::string& text);

// Renders epoch seconds as an ISO date when midnight-aligned, otherwise as
// the raw integer. Inverse of parse_timestamp.
std::string format_timestamp(std::int64_t ts);

}  // namespace deepsupp

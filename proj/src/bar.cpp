#include "deepsupp/bar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace deepsupp {

std::string bar_violation(const Bar& bar) {
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_pos(bar.open) || !finite_pos(bar.high) || !finite_pos(bar.low) ||
        !finite_pos(bar.close))
        return "prices must be finite and > 0";
    if (!std::isfinite(bar.volume) || bar.volume < 0.0)
        return "volume must be finite and >= 0";
    if (bar.low > bar.high)
        return "low > high";
    if (bar.open < bar.low || bar.open > bar.high)
        return "open outside [low, high]";
    if (bar.close < bar.low || bar.close > bar.high)
        return "close outside [low, high]";
    return {};
}

void check_series(const BarSeries& series) {
    if (series.bars.empty())
        throw std::runtime_error("series '" + series.ticker + "' is empty");
    for (std::size_t i = 0; i < series.bars.size(); ++i) {
        std::string why = bar_violation(series.bars[i]);
        if (!why.empty())
            throw std::runtime_error("series '" + series.ticker + "' bar " +
                                     std::to_string(i) + ": " + why);
        if (i > 0 && series.bars[i].timestamp <= series.bars[i - 1].timestamp)
            throw std::runtime_error("series '" + series.ticker + "' bar " +
                                     std::to_string(i) +
                                     ": timestamps not strictly increasing");
    }
}

namespace {

constexpr std::size_t kZeroVolumeRunMin = 2;
constexpr std::size_t kConstantPriceRunMin = 20;

std::int64_t median_spacing(const std::vector<Bar>& bars) {
    std::vector<std::int64_t> d;
    d.reserve(bars.size() - 1);
    for (std::size_t i = 1; i < bars.size(); ++i)
        d.push_back(bars[i].timestamp - bars[i - 1].timestamp);
    std::sort(d.begin(), d.end());
    return d[d.size() / 2];
}

}  // namespace

ValidationReport validate_series(const BarSeries& series) {
    ValidationReport report;
    const auto& bars = series.bars;
    if (bars.size() < 2)
        return report;

    std::int64_t spacing = median_spacing(bars);
    for (std::size_t i = 1; i < bars.size(); ++i) {
        std::int64_t dt = bars[i].timestamp - bars[i - 1].timestamp;
        if (spacing > 0 && dt > 3 * spacing) {
            report.findings.push_back(
                {FindingKind::Gap, i - 1, i,
                 "timestamp gap of " + std::to_string(dt) + "s between bars " +
                     std::to_string(i - 1) + " and " + std::to_string(i)});
        }
    }

    auto scan_runs = [&](auto in_run, FindingKind kind, std::size_t min_len,
                         const char* what) {
        std::size_t start = 0;
        std::size_t len = 0;
        auto flush = [&](std::size_t end) {
            if (len >= min_len) {
                report.findings.push_back(
                    {kind, start, end,
                     std::string(what) + " run over bars [" + std::to_string(start) +
                         ", " + std::to_string(end) + "]"});
            }
            len = 0;
        };
        for (std::size_t i = 0; i < bars.size(); ++i) {
            if (in_run(i)) {
                if (len == 0)
                    start = i;
                ++len;
            } else {
                flush(i - 1);
            }
        }
        flush(bars.size() - 1);
    };

    scan_runs([&](std::size_t i) { return bars[i].volume == 0.0; },
              FindingKind::ZeroVolumeRun, kZeroVolumeRunMin, "zero-volume");
    scan_runs([&](std::size_t i) { return i > 0 && bars[i].close == bars[i - 1].close; },
              FindingKind::ConstantPriceRun, kConstantPriceRunMin, "constant-price");

    return report;
}

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

std::int64_t parse_timestamp(const std::string& text) {
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        int y, m, d;
        if (std::sscanf(text.c_str(), "%4d-%2d-%2d", &y, &m, &d) == 3 && m >= 1 &&
            m <= 12 && d >= 1 && d <= 31)
            return days_from_civil(y, m, d) * 86400;
        throw std::runtime_error("bad date '" + text + "'");
    }
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(text, &pos);
        if (pos == text.size())
            return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("bad timestamp '" + text +
                             "' (expected YYYY-MM-DD or epoch seconds)");
}

std::string format_timestamp(std::int64_t ts) {
    if (ts % 86400 == 0) {
        int y, m, d;
        civil_from_days(ts / 86400, y, m, d);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return buf;
    }
    return std::to_string(ts);
}

}  // namespace deepsupp

#pragma once

#include <array>
#include <string>
#include <vector>

#include "deepsupp/bar.hpp"

namespace deepsupp {

constexpr std::size_t kFeatureCount = 5;

enum FeatureColumn : std::size_t {
    kClose = 0,
    kVwap = 1,
    kVolume = 2,
    kPriceChangeVolume = 3,
    kVolumeRatio = 4,
};

extern const std::array<const char*, kFeatureCount> kFeatureNames;

// T x 5 feature grid, columns in the fixed order
// [Close, VWAP, Volume, PriceChangeVolume, VolumeRatio].
struct FeatureMatrix {
    std::string ticker;
    bool scaled = false;
    std::vector<std::array<double, kFeatureCount>> rows;

    std::size_t size() const { return rows.size(); }
    std::vector<double> column(std::size_t c) const;
};

struct ScalingParams {
    std::array<double, kFeatureCount> min{};
    std::array<double, kFeatureCount> max{};
};

// Cumulative volume-weighted average of closes from the first bar. When the
// cumulative volume is still zero at t, VWAP_t falls back to the close.
std::vector<double> compute_vwap(const BarSeries& series);

// Relative close-to-close change times current volume; first bar is 0.
std::vector<double> compute_price_change_volume(const BarSeries& series);

// Volume over its trailing 20-bar mean (including the current bar; shorter
// history uses all available bars). A zero mean yields ratio 1.
std::vector<double> compute_volume_ratio(const BarSeries& series);

// Assembles the unscaled feature matrix. Requires >= 2 bars.
FeatureMatrix build_feature_matrix(const BarSeries& series);

// Per-column (x - min) / (max - min); constant columns map to all zeros.
FeatureMatrix minmax_scale(const FeatureMatrix& matrix, ScalingParams* params = nullptr);

// `features dump` CSV: date column plus the five feature columns.
void write_feature_csv(const BarSeries& series, const FeatureMatrix& matrix,
                       const std::string& path);

}  // namespace deepsupp

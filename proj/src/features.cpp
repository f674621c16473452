#include "deepsupp/features.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace deepsupp {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "close", "vwap", "volume", "price_change_volume", "volume_ratio"};

std::vector<double> FeatureMatrix::column(std::size_t c) const {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = rows[i][c];
    return out;
}

std::vector<double> compute_vwap(const BarSeries& series) {
    check_series(series);
    std::vector<double> out(series.size());
    double pv = 0.0;
    double v = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        pv += series.bars[t].close * series.bars[t].volume;
        v += series.bars[t].volume;
        out[t] = v > 0.0 ? pv / v : series.bars[t].close;
    }
    return out;
}

std::vector<double> compute_price_change_volume(const BarSeries& series) {
    check_series(series);
    std::vector<double> out(series.size());
    out[0] = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        double prev = series.bars[t - 1].close;
        out[t] = (series.bars[t].close - prev) / prev * series.bars[t].volume;
    }
    return out;
}

std::vector<double> compute_volume_ratio(const BarSeries& series) {
    check_series(series);
    std::vector<double> out(series.size());
    double window_sum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        window_sum += series.bars[t].volume;
        if (t >= 20)
            window_sum -= series.bars[t - 20].volume;
        std::size_t n = std::min<std::size_t>(t + 1, 20);
        double mean = window_sum / static_cast<double>(n);
        out[t] = mean == 0.0 ? 1.0 : series.bars[t].volume / mean;
    }
    return out;
}

FeatureMatrix build_feature_matrix(const BarSeries& series) {
    if (series.size() < 2)
        throw std::runtime_error("feature matrix needs >= 2 bars (got " +
                                 std::to_string(series.size()) + ")");
    auto vwap = compute_vwap(series);
    auto pcv = compute_price_change_volume(series);
    auto vr = compute_volume_ratio(series);

    FeatureMatrix m;
    m.ticker = series.ticker;
    m.rows.resize(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        m.rows[t][kClose] = series.bars[t].close;
        m.rows[t][kVwap] = vwap[t];
        m.rows[t][kVolume] = series.bars[t].volume;
        m.rows[t][kPriceChangeVolume] = pcv[t];
        m.rows[t][kVolumeRatio] = vr[t];
    }
    return m;
}

FeatureMatrix minmax_scale(const FeatureMatrix& matrix, ScalingParams* params) {
    if (matrix.scaled)
        throw std::invalid_argument("minmax_scale: matrix already scaled");
    if (matrix.rows.empty())
        throw std::invalid_argument("minmax_scale: empty matrix");

    ScalingParams p;
    for (std::size_t c = 0; c < kFeatureCount; ++c) {
        p.min[c] = p.max[c] = matrix.rows[0][c];
        for (const auto& row : matrix.rows) {
            p.min[c] = std::min(p.min[c], row[c]);
            p.max[c] = std::max(p.max[c], row[c]);
        }
    }
    FeatureMatrix out;
    out.ticker = matrix.ticker;
    out.scaled = true;
    out.rows.resize(matrix.rows.size());
    for (std::size_t t = 0; t < matrix.rows.size(); ++t) {
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            double span = p.max[c] - p.min[c];
            out.rows[t][c] = span > 0.0 ? (matrix.rows[t][c] - p.min[c]) / span : 0.0;
        }
    }
    if (params)
        *params = p;
    return out;
}

void write_feature_csv(const BarSeries& series, const FeatureMatrix& matrix,
                       const std::string& path) {
    if (series.size() != matrix.size())
        throw std::invalid_argument("feature csv: series/matrix size mismatch");
    std::ofstream file(path);
    if (!file.is_open())
        throw std::runtime_error("cannot write '" + path + "'");
    file << "date";
    for (auto name : kFeatureNames)
        file << ',' << name;
    file << '\n';
    char buf[64];
    for (std::size_t t = 0; t < matrix.size(); ++t) {
        file << format_timestamp(series.bars[t].timestamp);
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            std::snprintf(buf, sizeof(buf), ",%.17g", matrix.rows[t][c]);
            file << buf;
        }
        file << '\n';
    }
    if (!file.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace deepsupp

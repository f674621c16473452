#include "deepsupp/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace deepsupp {

std::vector<double> average_ranks(std::span<const double> x) {
    std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]])
            ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman_rho: length mismatch");
    if (x.size() < 2)
        throw std::invalid_argument("spearman_rho: need n >= 2");

    bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
    bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    if (x_const || y_const)
        return 0.0;

    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;  // ranks always average to (n+1)/2
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    double rho = sxy / std::sqrt(sxx * syy);
    return std::clamp(rho, -1.0, 1.0);
}

Mat pad_to_model_dim(const Mat& raw) {
    Mat padded(kModelDim, kModelDim);
    for (std::size_t i = 0; i < raw.rows; ++i)
        for (std::size_t j = 0; j < raw.cols; ++j)
            padded(i, j) = raw(i, j);
    for (std::size_t k = raw.rows; k < kModelDim; ++k)
        padded(k, k) = 1.0;
    return padded;
}

CorrSequence rolling_correlation_matrices(const FeatureMatrix& matrix,
                                          std::size_t window, std::size_t stride) {
    if (!matrix.scaled)
        throw std::invalid_argument("rolling correlations expect a scaled matrix");
    if (window < 2 || window > kModelDim)
        throw std::invalid_argument("window must be in [2, 32]");
    if (stride == 0)
        throw std::invalid_argument("stride must be >= 1");
    if (matrix.size() < window)
        throw std::runtime_error("need at least " + std::to_string(window) +
                                 " rows for one correlation window (got " +
                                 std::to_string(matrix.size()) + ")");

    CorrSequence seq;
    seq.ticker = matrix.ticker;
    seq.window_length = window;
    seq.stride = stride;

    std::array<std::vector<double>, kFeatureCount> cols;
    for (std::size_t c = 0; c < kFeatureCount; ++c)
        cols[c].resize(window);

    for (std::size_t end = window; end <= matrix.size(); end += stride) {
        std::size_t start = end - window;  // 0-based window [start, end)
        for (std::size_t c = 0; c < kFeatureCount; ++c)
            for (std::size_t t = 0; t < window; ++t)
                cols[c][t] = matrix.rows[start + t][c];

        CorrMatrix cm;
        cm.window_end = end;
        cm.raw = Mat(kFeatureCount, kFeatureCount);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            bool is_const = std::all_of(cols[i].begin(), cols[i].end(),
                                        [&](double v) { return v == cols[i][0]; });
            cm.raw(i, i) = is_const ? 0.0 : 1.0;
            for (std::size_t j = i + 1; j < kFeatureCount; ++j) {
                double rho = spearman_rho(cols[i], cols[j]);
                cm.raw(i, j) = rho;
                cm.raw(j, i) = rho;
            }
        }
        cm.padded = pad_to_model_dim(cm.raw);
        seq.matrices.push_back(std::move(cm));
    }
    return seq;
}

void write_corr_csv(const Mat& padded, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open())
        throw std::runtime_error("cannot write '" + path + "'");
    char buf[64];
    for (std::size_t i = 0; i < padded.rows; ++i) {
        for (std::size_t j = 0; j < padded.cols; ++j) {
            std::snprintf(buf, sizeof(buf), "%s%.17g", j == 0 ? "" : ",", padded(i, j));
            file << buf;
        }
        file << '\n';
    }
    if (!file.good())
        throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace deepsupp

#pragma once

#include <span>
#include <string>
#include <vector>

#include "deepsupp/features.hpp"
#include "deepsupp/matrix.hpp"

namespace deepsupp {

constexpr std::size_t kModelDim = 32;

// One rolling-window correlation snapshot. `window_end` is the 1-based
// index of the window's final bar (the first full window ends at
// window_end == window length).
struct CorrMatrix {
    std::size_t window_end = 0;
    Mat raw;     // 5x5, symmetric, unit diagonal (0 for constant columns)
    Mat padded;  // 32x32 identity-extended block embedding
};

struct CorrSequence {
    std::string ticker;
    std::size_t window_length = kModelDim;
    std::size_t stride = 1;
    std::vector<CorrMatrix> matrices;

    std::size_t size() const { return matrices.size(); }
};

// Spearman rank correlation with average-rank tie handling, computed as the
// Pearson correlation of the rank vectors (identical to the classic
// 1 - 6*sum(d^2)/(n(n^2-1)) form when all values are distinct). Either
// vector constant => 0. Throws std::invalid_argument for n < 2 or length
// mismatch.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based, ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> x);

// One CorrMatrix per window end over the scaled feature matrix.
CorrSequence rolling_correlation_matrices(const FeatureMatrix& matrix,
                                          std::size_t window = kModelDim,
                                          std::size_t stride = 1);

// Embeds the 5x5 block at the top-left of a 32x32 matrix, unit diagonal on
// the padded positions, zeros elsewhere.
Mat pad_to_model_dim(const Mat& raw);

// `corr dump` CSV: the padded matrix, one row per line.
void write_corr_csv(const Mat& padded, const std::string& path);

}  // namespace deepsupp

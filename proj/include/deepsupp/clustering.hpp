#pragma once

#include <cstdint>
#include <vector>

#include "deepsupp/attention.hpp"
#include "deepsupp/bar.hpp"
#include "deepsupp/levels.hpp"

namespace deepsupp {

struct ClusterLabels {
    std::vector<int> labels;  // -1 noise, 0..K-1 clusters (contiguous)
    double eps = 0.0;
    std::size_t min_samples = 0;

    int cluster_count() const;
};

// min_samples = max(2, round(fraction * n)).
std::size_t default_min_samples(std::size_t n, double fraction = 0.10);

// Euclidean DBSCAN; a point is core when at least min_samples points
// (itself included) lie within eps. Clusters are numbered by their lowest
// core index; border points join the cluster whose expansion reaches them
// first, i.e. the one with the smallest seed index.
ClusterLabels dbscan(const std::vector<std::vector<double>>& points, double eps,
                     std::size_t min_samples);

// Per cluster, the median close at the member windows' end bars; noise
// contributes nothing. Returns a warning string per anomaly when `warnings`
// is provided (e.g. everything labelled noise).
SupportLevelSet extract_support_levels(const ClusterLabels& labels,
                                       const std::vector<Embedding>& embeddings,
                                       const BarSeries& series,
                                       std::vector<std::string>* warnings = nullptr);

struct DeepSuppConfig {
    std::size_t window = kModelDim;
    std::size_t stride = 1;
    ModelConfig model;
    double eps = 0.1;
    double min_samples_fraction = 0.10;
    double merge_tol = 0.001;
};

// The full pipeline: features -> minmax scale -> rolling Spearman windows ->
// autoencoder training -> bottleneck embeddings -> DBSCAN -> median support
// levels. Deterministic per config.model.seed. Requires window + 1 bars.
SupportLevelSet detect_deepsupp(const BarSeries& series, const DeepSuppConfig& config,
                                std::vector<std::string>* warnings = nullptr,
                                Model* trained_out = nullptr);

}  // namespace deepsupp

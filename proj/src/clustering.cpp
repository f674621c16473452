#include "deepsupp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace deepsupp {

int ClusterLabels::cluster_count() const {
    int mx = -1;
    for (int l : labels)
        mx = std::max(mx, l);
    return mx + 1;
}

std::size_t default_min_samples(std::size_t n, double fraction) {
    auto frac = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n)));
    return std::max<std::size_t>(2, frac);
}

ClusterLabels dbscan(const std::vector<std::vector<double>>& points, double eps,
                     std::size_t min_samples) {
    if (points.empty())
        throw std::invalid_argument("dbscan: no points");
    if (!(eps > 0.0))
        throw std::invalid_argument("dbscan: eps must be positive");
    if (min_samples < 1)
        throw std::invalid_argument("dbscan: min_samples must be >= 1");

    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim)
            throw std::invalid_argument("dbscan: inconsistent point dimensions");

    const double eps2 = eps * eps;
    auto within = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            double diff = points[a][d] - points[b][d];
            s += diff * diff;
            if (s > eps2)
                return false;
        }
        return true;
    };

    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        neighbors[i].push_back(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (within(i, j)) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
    }
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = neighbors[i].size() >= min_samples;

    ClusterLabels result;
    result.eps = eps;
    result.min_samples = min_samples;
    result.labels.assign(n, -1);
    std::vector<bool> claimed(n, false);

    int next_cluster = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (claimed[seed] || !core[seed])
            continue;
        int cid = next_cluster++;
        std::deque<std::size_t> queue;
        queue.push_back(seed);
        claimed[seed] = true;
        while (!queue.empty()) {
            std::size_t p = queue.front();
            queue.pop_front();
            result.labels[p] = cid;
            if (!core[p])
                continue;  // border points terminate expansion
            for (std::size_t q : neighbors[p]) {
                if (!claimed[q]) {
                    claimed[q] = true;
                    queue.push_back(q);
                }
            }
        }
    }
    return result;
}

SupportLevelSet extract_support_levels(const ClusterLabels& labels,
                                       const std::vector<Embedding>& embeddings,
                                       const BarSeries& series,
                                       std::vector<std::string>* warnings) {
    if (labels.labels.size() != embeddings.size())
        throw std::invalid_argument("extract_support_levels: labels/embeddings mismatch");

    int clusters = labels.cluster_count();
    std::vector<std::vector<double>> closes(clusters);
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        int c = labels.labels[i];
        if (c < 0)
            continue;
        std::size_t end = embeddings[i].window_end;  // 1-based final bar of the window
        if (end == 0 || end > series.size())
            throw std::invalid_argument("extract_support_levels: window_end out of range");
        closes[c].push_back(series.bars[end - 1].close);
    }

    std::vector<SupportLevel> raw;
    for (int c = 0; c < clusters; ++c) {
        if (closes[c].empty())
            continue;
        SupportLevel lvl;
        lvl.cluster_id = c;
        lvl.member_count = closes[c].size();
        lvl.price = median(closes[c]);
        raw.push_back(lvl);
    }
    if (raw.empty() && warnings)
        warnings->push_back("series '" + series.ticker +
                            "': all windows labelled noise, empty level set");
    return make_level_set(series.ticker, "deepsupp", std::move(raw));
}

SupportLevelSet detect_deepsupp(const BarSeries& series, const DeepSuppConfig& config,
                                std::vector<std::string>* warnings, Model* trained_out) {
    std::size_t min_bars = config.window + 1;
    if (series.size() < min_bars)
        throw std::runtime_error("detect_deepsupp: need at least " +
                                 std::to_string(min_bars) + " bars (got " +
                                 std::to_string(series.size()) + ")");

    FeatureMatrix raw = build_feature_matrix(series);
    FeatureMatrix scaled = minmax_scale(raw);
    CorrSequence seq = rolling_correlation_matrices(scaled, config.window, config.stride);

    Model model = init_model(config.model);
    TrainResult trained = train(model, seq, config.model);
    if (trained_out)
        *trained_out = trained.model;

    std::vector<Embedding> embeddings = embed_sequence(trained.model, seq);
    std::vector<std::vector<double>> points;
    points.reserve(embeddings.size());
    for (const auto& e : embeddings)
        points.push_back(e.values);

    std::size_t min_samples =
        default_min_samples(points.size(), config.min_samples_fraction);
    ClusterLabels labels = dbscan(points, config.eps, min_samples);

    SupportLevelSet set = extract_support_levels(labels, embeddings, series, warnings);
    set.levels = merge_close_levels(std::move(set.levels), config.merge_tol);
    return set;
}

}  // namespace deepsupp

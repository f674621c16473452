#pragma once

#include <string>
#include <vector>

namespace deepsupp {

struct SupportLevel {
    double price = 0.0;
    int cluster_id = -1;      // detector-specific grouping id, -1 when unused
    std::size_t member_count = 1;
    std::string method;
};

// Sorted strictly ascending; levels closer than merge_tol (relative) have
// been merged to the median of the group.
struct SupportLevelSet {
    std::string ticker;
    std::string method;
    std::vector<SupportLevel> levels;

    bool empty() const { return levels.empty(); }
    std::size_t size() const { return levels.size(); }
    std::vector<double> prices() const;
};

// Median with the even-size convention (mean of the two central values).
double median(std::vector<double> values);

// Linear-interpolation percentile of sorted-or-not values, p in [0, 100].
double percentile(std::vector<double> values, double p);

// Sorts by price and greedily merges groups whose neighbours are within
// rel_tol of the previous member; each group collapses to the median of its
// prices, summing member counts (representative id = largest member count,
// ties to the lowest cluster id).
std::vector<SupportLevel> merge_close_levels(std::vector<SupportLevel> levels,
                                             double rel_tol);

// Applies the merge + sort invariants and stamps ticker/method.
SupportLevelSet make_level_set(std::string ticker, std::string method,
                               std::vector<SupportLevel> levels,
                               double merge_tol = 0.001);

}  // namespace deepsupp
